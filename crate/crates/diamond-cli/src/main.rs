fn main() { println!("{}", diamond_core::placeholder()); }
