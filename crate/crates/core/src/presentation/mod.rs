//! Long presentations of finite solvable groups.
//!
//! A long presentation lists generators `x_1, ..., x_n` along a subnormal
//! series with prime cyclic factors, together with power relations
//! `x_i^p_i = w_i` and conjugation relations `x_i^-1 x_j x_i = w_ij` (`j < i`)
//! whose right-hand sides only involve generators of smaller index. Every
//! element has the unique normal form `x_1^a_1 ... x_n^a_n`, `0 <= a_i < p_i`.
//!
//! File syntax (line oriented, `#` starts a comment):
//!
//! ```text
//! group <name>
//! gen <symbol> prime <p>
//! pow <symbol> = <word>|1
//! conj <xi> <xj> = <word>
//! ```

mod group;
mod structure;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use group::{validate, Elem, Group, ValidationOptions, ValidationReport};
pub use structure::{Abelianization, CyclicQuotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: declared order {prime} of generator `{symbol}` is not prime")]
    NotPrime {
        line: usize,
        symbol: String,
        prime: u64,
    },
    #[error("line {line}: relation for `{generator}` uses `{symbol}`, which does not have smaller index")]
    IndexViolation {
        line: usize,
        generator: String,
        symbol: String,
    },
    #[error("missing power relation for generator `{0}`")]
    MissingPower(String),
    #[error("unknown generator `{0}`")]
    UnknownSymbol(String),
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("group order {order} exceeds the size cap {cap}")]
    SizeExceeded { order: u128, cap: usize },
    #[error("group is not abelian")]
    NotAbelian,
    #[error("group is not cyclic")]
    NotCyclic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub symbol: String,
    pub prime: u64,
}

/// An unreduced word: `(generator index, exponent)` syllables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&(g, _)| g).max()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongPresentation {
    pub name: String,
    pub generators: Vec<Generator>,
    /// `power_relations[i]` is `w_i` with `x_i^p_i = w_i`.
    pub power_relations: Vec<Word>,
    /// `conj_relations[i][j]` (`j < i`) is `w_ij` with `x_i^-1 x_j x_i = w_ij`.
    pub conj_relations: Vec<Vec<Word>>,
}

impl LongPresentation {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn symbol_index(&self, sym: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.symbol == sym)
    }

    /// Nominal order `prod p_i`, before consistency is certified.
    pub fn nominal_order(&self) -> u128 {
        self.generators.iter().map(|g| g.prime as u128).product()
    }

    /// Parses a word such as `x y^2 z^-1` (or `1`) over this presentation's
    /// generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        let syms: HashMap<&str, usize> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.symbol.as_str(), i))
            .collect();
        let toks: Vec<(usize, &str)> = tokenize(text);
        parse_word_tokens(&toks, &syms, 0).map_err(|e| match e {
            PresentationError::Syntax { message, .. }
                if message.starts_with("unknown generator") =>
            {
                PresentationError::UnknownSymbol(
                    message
                        .trim_start_matches("unknown generator ")
                        .trim_matches('`')
                        .to_string(),
                )
            }
            other => other,
        })
    }

    /// Synthesizes the tower presentation of the cyclic group of order `n`:
    /// one generator per prime factor, `x_1^p_1 = 1`, `x_i^p_i = x_(i-1)`,
    /// all conjugation trivial. The last generator has order `n`.
    pub fn cyclic(n: u64) -> Self {
        let primes = if n <= 1 {
            vec![]
        } else {
            crate::prime_factors(n)
        };
        let k = primes.len();
        let generators = primes
            .iter()
            .enumerate()
            .map(|(i, &p)| Generator {
                symbol: format!("x{}", i + 1),
                prime: p,
            })
            .collect();
        let power_relations = (0..k)
            .map(|i| {
                if i == 0 {
                    Word::identity()
                } else {
                    Word(vec![(i - 1, 1)])
                }
            })
            .collect();
        let conj_relations = (0..k)
            .map(|i| (0..i).map(|j| Word(vec![(j, 1)])).collect())
            .collect();
        LongPresentation {
            name: format!("C{n}"),
            generators,
            power_relations,
            conj_relations,
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.0.is_empty() {
            return "1".into();
        }
        w.0.iter()
            .map(|&(g, e)| {
                let s = &self.generators[g].symbol;
                if e == 1 {
                    s.clone()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for LongPresentation {
    /// Writes the presentation back in file syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {}", self.name)?;
        for g in &self.generators {
            writeln!(f, "gen {} prime {}", g.symbol, g.prime)?;
        }
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(
                f,
                "pow {} = {}",
                g.symbol,
                self.format_word(&self.power_relations[i])
            )?;
        }
        for (i, g) in self.generators.iter().enumerate() {
            for j in 0..i {
                let w = &self.conj_relations[i][j];
                if *w != Word(vec![(j, 1)]) {
                    writeln!(
                        f,
                        "conj {} {} = {}",
                        g.symbol,
                        self.generators[j].symbol,
                        self.format_word(w)
                    )?;
                }
            }
        }
        Ok(())
    }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_word_tokens(
    toks: &[(usize, &str)],
    syms: &HashMap<&str, usize>,
    line: usize,
) -> Result<Word, PresentationError> {
    let syntax = |column: usize, message: String| PresentationError::Syntax {
        line,
        column,
        message,
    };
    if toks.is_empty() {
        return Err(syntax(0, "expected a word".into()));
    }
    if toks.len() == 1 && toks[0].1 == "1" {
        return Ok(Word::identity());
    }
    let mut out = Vec::with_capacity(toks.len());
    for &(col, tok) in toks {
        let (sym, exp) = match tok.split_once('^') {
            Some((s, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| syntax(col, format!("bad exponent in `{tok}`")))?;
                (s, e)
            }
            None => (tok, 1),
        };
        let &g = syms
            .get(sym)
            .ok_or_else(|| syntax(col, format!("unknown generator `{sym}`")))?;
        out.push((g, exp));
    }
    Ok(Word(out))
}

/// Parses the presentation file format. Index constraints are checked;
/// consistency is not (see [`validate`]).
pub fn parse_presentation(text: &str) -> Result<LongPresentation, PresentationError> {
    let lines: Vec<(usize, Vec<(usize, &str)>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokenize(l.split('#').next().unwrap_or(""))))
        .filter(|(_, t)| !t.is_empty())
        .collect();

    let mut name = String::from("G");
    let mut generators: Vec<Generator> = Vec::new();
    for (line, toks) in &lines {
        let line = *line;
        let syntax = |column: usize, message: &str| PresentationError::Syntax {
            line,
            column,
            message: message.into(),
        };
        match toks[0].1 {
            "group" => {
                if toks.len() < 2 {
                    return Err(syntax(toks[0].0, "expected a group name"));
                }
                name = toks[1..].iter().map(|t| t.1).collect::<Vec<_>>().join(" ");
            }
            "gen" => {
                if toks.len() != 4 || toks[2].1 != "prime" {
                    return Err(syntax(toks[0].0, "expected `gen <symbol> prime <p>`"));
                }
                let symbol = toks[1].1;
                if symbol == "1" || symbol.contains('^') || symbol == "=" {
                    return Err(syntax(toks[1].0, "invalid generator symbol"));
                }
                if generators.iter().any(|g| g.symbol == symbol) {
                    return Err(syntax(toks[1].0, "duplicate generator"));
                }
                let prime: u64 = toks[3]
                    .1
                    .parse()
                    .map_err(|_| syntax(toks[3].0, "expected an integer order"))?;
                if !crate::is_prime(prime) {
                    return Err(PresentationError::NotPrime {
                        line,
                        symbol: symbol.into(),
                        prime,
                    });
                }
                generators.push(Generator {
                    symbol: symbol.into(),
                    prime,
                });
            }
            "pow" | "conj" => {}
            other => {
                return Err(syntax(toks[0].0, &format!("unknown directive `{other}`")));
            }
        }
    }

    let n = generators.len();
    let syms: HashMap<&str, usize> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.symbol.as_str(), i))
        .collect();
    let mut power: Vec<Option<Word>> = vec![None; n];
    let mut conj: Vec<Vec<Option<Word>>> = (0..n).map(|i| vec![None; i]).collect();

    for (line, toks) in &lines {
        let line = *line;
        let syntax = |column: usize, message: String| PresentationError::Syntax {
            line,
            column,
            message,
        };
        let lookup = |tok: (usize, &str)| -> Result<usize, PresentationError> {
            syms.get(tok.1)
                .copied()
                .ok_or_else(|| syntax(tok.0, format!("unknown generator `{}`", tok.1)))
        };
        let check_index = |gen: usize, w: &Word| -> Result<(), PresentationError> {
            match w.0.iter().find(|&&(g, _)| g >= gen) {
                Some(&(g, _)) => Err(PresentationError::IndexViolation {
                    line,
                    generator: generators[gen].symbol.clone(),
                    symbol: generators[g].symbol.clone(),
                }),
                None => Ok(()),
            }
        };
        match toks[0].1 {
            "pow" => {
                if toks.len() < 4 || toks[2].1 != "=" {
                    return Err(syntax(toks[0].0, "expected `pow <symbol> = <word>`".into()));
                }
                let i = lookup(toks[1])?;
                let w = parse_word_tokens(&toks[3..], &syms, line)?;
                check_index(i, &w)?;
                if power[i].replace(w).is_some() {
                    return Err(syntax(
                        toks[0].0,
                        format!("duplicate power relation for `{}`", toks[1].1),
                    ));
                }
            }
            "conj" => {
                if toks.len() < 5 || toks[3].1 != "=" {
                    return Err(syntax(
                        toks[0].0,
                        "expected `conj <xi> <xj> = <word>`".into(),
                    ));
                }
                let i = lookup(toks[1])?;
                let j = lookup(toks[2])?;
                if j >= i {
                    return Err(PresentationError::IndexViolation {
                        line,
                        generator: generators[i].symbol.clone(),
                        symbol: generators[j].symbol.clone(),
                    });
                }
                let w = parse_word_tokens(&toks[4..], &syms, line)?;
                check_index(i, &w)?;
                if conj[i][j].replace(w).is_some() {
                    return Err(syntax(toks[0].0, "duplicate conjugation relation".into()));
                }
            }
            _ => {}
        }
    }

    let power_relations = power
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| PresentationError::MissingPower(generators[i].symbol.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let conj_relations = conj
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .map(|(j, w)| w.unwrap_or(Word(vec![(j, 1)])))
                .collect()
        })
        .collect();
    Ok(LongPresentation {
        name,
        generators,
        power_relations,
        conj_relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SL23: &str = "\
group SL2(3)
gen x prime 2
gen y prime 2
gen z prime 2
gen t prime 3
pow x = 1
pow y = x
pow z = x
pow t = 1
conj z y = x y
conj t y = z
conj t z = y z
";

    #[test]
    fn parses_sl23() {
        let lp = parse_presentation(SL23).unwrap();
        assert_eq!(lp.name, "SL2(3)");
        let primes: Vec<u64> = lp.generators.iter().map(|g| g.prime).collect();
        assert_eq!(primes, vec![2, 2, 2, 3]);
        assert_eq!(lp.power_relations[1], Word(vec![(0, 1)]));
        assert_eq!(lp.conj_relations[3][2], Word(vec![(1, 1), (2, 1)]));
        // missing conj defaults to trivial action
        assert_eq!(lp.conj_relations[3][0], Word(vec![(0, 1)]));
        // display round trip
        assert_eq!(parse_presentation(&lp.to_string()).unwrap(), lp);
    }

    #[test]
    fn parses_one_generator_cyclic() {
        let lp = parse_presentation("group C3\ngen t prime 3\npow t = 1\n").unwrap();
        assert_eq!(lp.num_generators(), 1);
        assert_eq!(lp.power_relations[0], Word::identity());
    }

    #[test]
    fn rejects_index_violations() {
        let text = "gen y prime 2\ngen z prime 2\ngen t prime 3\npow y = 1\npow z = 1\npow t = 1\nconj y t = z\n";
        assert!(matches!(
            parse_presentation(text),
            Err(PresentationError::IndexViolation { line: 7, .. })
        ));
        let text = "gen y prime 2\ngen z prime 2\npow y = z\npow z = 1\n";
        assert!(matches!(
            parse_presentation(text),
            Err(PresentationError::IndexViolation { line: 3, .. })
        ));
        // a conjugation word may not use x_i itself
        let text = "gen y prime 2\ngen z prime 2\npow y = 1\npow z = 1\nconj z y = y z\n";
        assert!(matches!(
            parse_presentation(text),
            Err(PresentationError::IndexViolation { line: 5, .. })
        ));
    }

    #[test]
    fn reports_syntax_errors_with_position() {
        let err = parse_presentation("gen x prime 2\npow x == 1\n").unwrap_err();
        assert_eq!(
            err,
            PresentationError::Syntax {
                line: 2,
                column: 1,
                message: "expected `pow <symbol> = <word>`".into()
            }
        );
        let err = parse_presentation("gen x prime 2\npow x = q\n").unwrap_err();
        assert!(matches!(
            err,
            PresentationError::Syntax {
                line: 2,
                column: 9,
                ..
            }
        ));
        assert!(matches!(
            parse_presentation("gen x prime 4\npow x = 1\n"),
            Err(PresentationError::NotPrime { prime: 4, .. })
        ));
        assert!(matches!(
            parse_presentation("gen x prime 2\n"),
            Err(PresentationError::MissingPower(_))
        ));
    }

    #[test]
    fn cyclic_tower() {
        let lp = LongPresentation::cyclic(12);
        let primes: Vec<u64> = lp.generators.iter().map(|g| g.prime).collect();
        assert_eq!(primes, vec![2, 2, 3]);
        assert_eq!(lp.power_relations[2], Word(vec![(1, 1)]));
    }
}
