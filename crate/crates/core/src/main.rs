fn main() {
    let argv = std::env::args().collect();
    let code = accordion::harness::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
