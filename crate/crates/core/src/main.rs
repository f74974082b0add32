use puiseux_lift::cli::run_command;

fn main() {
    let invocation = run_command(std::env::args_os());
    println!("{}", invocation.output.trim_end());
    std::process::exit(invocation.exit_code);
}
