//! Drives the command layer in-process, as the `hrgm` binary does.

fn main() {
    for args in [
        vec!["hrgm", "mlt", "c4-experiment", "--x2", "0", "--x3", "0.5"],
        vec!["hrgm", "reproduce", "example-2.2"],
    ] {
        let out = hrgm::cli::run(args.iter().copied());
        println!("$ {}\n{}(exit {})", args.join(" "), out.stdout, out.code);
    }
}
