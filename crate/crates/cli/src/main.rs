use std::io;

fn main() {
    graded_poisson::graded_algebra::guard::install_quiet_hook();
    let code = graded_poisson_cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
