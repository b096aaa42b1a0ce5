fn main() { std::process::exit(rhombus_cli::run(std::env::args().collect())); }
