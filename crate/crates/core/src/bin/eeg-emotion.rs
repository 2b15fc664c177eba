fn main() {
    std::process::exit(eeg_emotion::cli::main_with_args(std::env::args_os()));
}
