pub fn run_command<I: IntoIterator<Item = String>>(_argv: I) -> i32 { 0 }
