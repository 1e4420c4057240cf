#![allow(dead_code)]

use std::sync::Arc;

use solvrep::grpalg::AlgebraElement;
use solvrep::presentation::{Elem, Group};
use solvrep::CycNumber;

/// Every presentation file shipped with the crate.
pub const CORPUS: &[&str] = &[
    "c2", "c6", "c12", "c2xc2", "c3xc3", "s3", "d4", "q8", "a4", "c3_sd_c4", "sl2_3",
];

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}.grp", env!("CARGO_MANIFEST_DIR"))
}

pub fn load(name: &str) -> Arc<Group> {
    let text = std::fs::read_to_string(data_path(name)).expect("data file");
    Group::parse(&text).expect("valid presentation")
}

pub fn elem(g: &Group, word: &str) -> Elem {
    g.normalize(word).expect("word")
}

/// `(1 + s*g) / 2` for an involution (mod centre) `g` and sign `s`.
pub fn e_sign(g: &Arc<Group>, word: &str, sign: i64, m: u32) -> AlgebraElement {
    let a = elem(g, word);
    AlgebraElement::from_terms(
        g,
        m,
        [
            (g.identity(), CycNumber::from_ratio(1, 2, m)),
            (a, CycNumber::from_ratio(sign, 2, m)),
        ],
    )
}

/// `(1 + c*g + (c*g)^2) / 3` with `g` of order three.
pub fn e_cubic(g: &Arc<Group>, word: &str, c: &CycNumber, m: u32) -> AlgebraElement {
    let a = elem(g, word);
    let third = CycNumber::from_ratio(1, 3, m);
    AlgebraElement::from_terms(
        g,
        m,
        (0..3).map(|i| (g.pow(a, i), c.pow(i as u64).mul_ref(&third))),
    )
}

pub fn product(factors: &[AlgebraElement]) -> AlgebraElement {
    let mut it = factors.iter();
    let first = it.next().expect("nonempty").clone();
    it.fold(first, |acc, f| &acc * f)
}
