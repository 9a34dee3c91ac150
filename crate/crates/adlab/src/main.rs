fn main() {
    std::process::exit(adlab::run());
}
