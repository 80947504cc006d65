//! Runs every registered reproduction target and prints its PASS/FAIL lines.

use hrgm::reproduce::{run, Target};

fn main() {
    for t in Target::ALL {
        print!("{}", run(t).render());
    }
}
