use std::process::ExitCode;

fn main() -> ExitCode {
    skewsq::cli::main_with_args(std::env::args_os())
}
