//! mdbook cannot link the snippets in `book/` against this workspace, so
//! each chapter is pulled in as the doc comment of an empty module and run by
//! `cargo test --doc`. One module per chapter keeps failures attributable.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        #[cfg(doctest)]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(lattice, "lattice.md");
chapter!(classes, "classes.md");
chapter!(cones, "cones.md");
chapter!(fan, "fan.md");
chapter!(determinant, "determinant.md");
chapter!(surgery, "surgery.md");
chapter!(gale, "gale.md");
chapter!(cli, "cli.md");

#[doc = include_str!("../../../README.md")]
#[cfg(doctest)]
pub mod readme {}
