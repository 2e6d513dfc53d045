use std::process::ExitCode;

fn main() -> ExitCode {
    discord_game::cli::main_with_args(std::env::args_os())
}
