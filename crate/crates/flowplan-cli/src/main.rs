fn main() {
    println!("flowplan");
}
