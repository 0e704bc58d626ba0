fn main() {
    std::process::exit(nanobound::run(std::env::args_os()));
}
