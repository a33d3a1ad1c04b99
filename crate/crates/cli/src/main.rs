fn main() {
    std::process::exit(casson_cli::run(std::env::args_os()));
}
