fn main() {
    env_logger::init();
    std::process::exit(hybrid_contact::cli::run(std::env::args_os()));
}
