// scratch: run the full acceptance suite
fn main() {
    let results = rcch::selftest::run_all();
    print!("{}", rcch::selftest::render(&results));
    std::process::exit(if results.iter().all(|r| r.passed) { 0 } else { 1 });
}
