fn main() {
    let code = genbessel::cli_harness::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
