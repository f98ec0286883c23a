fn main() {
    std::process::exit(tablestack_bench::cli::run());
}
