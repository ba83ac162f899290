fn main() -> std::process::ExitCode {
    hardy_verify::cli::main_with_args(std::env::args_os())
}
