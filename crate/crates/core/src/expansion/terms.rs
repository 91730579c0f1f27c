//! Symbolic terms of the renormalized resolvent expansion with stopping order `N`.
//!
//! Starting from `R = R_r − R_r(λV + σ)R`, every trailing `R` is re-expanded
//! until the accumulated order reaches `N`; a potential insertion has order 1,
//! a bullet (`−σ`) order 2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest stopping order generated.
pub const MAX_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Insertion {
    /// `λV`, order 1.
    Potential,
    /// `σ`, order 2.
    Bullet,
}

impl Insertion {
    pub fn order(self) -> usize {
        match self {
            Insertion::Potential => 1,
            Insertion::Bullet => 2,
        }
    }

    pub fn code(self) -> char {
        match self {
            Insertion::Potential => 'P',
            Insertion::Bullet => 'B',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Terminal {
    /// Last propagator is `R_r`.
    Free,
    /// Last propagator is the full `R`.
    Full,
}

/// `(−1)^k R_r X₁ R_r X₂ ⋯ R_r X_k T` with `T ∈ {R_r, R}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub insertions: Vec<Insertion>,
    pub terminal: Terminal,
}

impl ExpansionTerm {
    pub fn order(&self) -> usize {
        self.insertions.iter().map(|i| i.order()).sum()
    }

    pub fn sign(&self) -> f64 {
        if self.insertions.len().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn potential_count(&self) -> usize {
        self.insertions.iter().filter(|&&i| i == Insertion::Potential).count()
    }

    /// Insertion string, `-` when empty.
    pub fn code(&self) -> String {
        if self.insertions.is_empty() {
            "-".into()
        } else {
            self.insertions.iter().map(|i| i.code()).collect()
        }
    }

    /// Operator product with sign and power of `λ`, e.g. `+λ² R_r V R_r V R`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        if !self.insertions.is_empty() {
            s.push(if self.sign() > 0.0 { '+' } else { '-' });
        }
        match self.potential_count() {
            0 => {}
            1 => s.push('λ'),
            2 => s.push_str("λ²"),
            3 => s.push_str("λ³"),
            k => s.push_str(&format!("λ^{k}")),
        }
        if !s.is_empty() && s != "+" && s != "-" {
            s.push(' ');
        }
        let mut parts = vec!["R_r".to_string()];
        for ins in &self.insertions {
            parts.push(match ins {
                Insertion::Potential => "V".into(),
                Insertion::Bullet => "σ".into(),
            });
            parts.push("R_r".into());
        }
        if self.terminal == Terminal::Full {
            *parts.last_mut().unwrap() = "R".into();
        }
        s.push_str(&parts.join(" "));
        s
    }
}

impl fmt::Display for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}",
            self.code(),
            self.order(),
            match self.terminal {
                Terminal::Free => "free",
                Terminal::Full => "full",
            }
        )
    }
}

/// Explicit terms `A_l`, `l < N`, and remainder terms ending in `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: usize,
    pub explicit_terms: Vec<ExpansionTerm>,
    pub remainder_terms: Vec<ExpansionTerm>,
}

impl Decomposition {
    /// All terms in canonical order (lexicographic in the insertion string, potential before bullet).
    pub fn terms(&self) -> Vec<ExpansionTerm> {
        let mut all: Vec<ExpansionTerm> = self
            .explicit_terms
            .iter()
            .chain(&self.remainder_terms)
            .cloned()
            .collect();
        all.sort();
        all
    }

    /// Terms of `A_l`.
    pub fn explicit_of_order(&self, l: usize) -> Vec<&ExpansionTerm> {
        self.explicit_terms.iter().filter(|t| t.order() == l).collect()
    }

    /// Remainder terms whose last insertion is a potential (the `A′_N` part).
    pub fn remainder_potential(&self) -> Vec<&ExpansionTerm> {
        self.remainder_terms
            .iter()
            .filter(|t| t.insertions.last() == Some(&Insertion::Potential))
            .collect()
    }

    /// Remainder terms whose last insertion is a bullet (the `B_N` part).
    pub fn remainder_bullet(&self) -> Vec<&ExpansionTerm> {
        self.remainder_terms
            .iter()
            .filter(|t| t.insertions.last() == Some(&Insertion::Bullet))
            .collect()
    }

    /// Text table `insertions<TAB>order<TAB>terminal`, one term per line.
    pub fn to_table(&self) -> String {
        let mut s = String::from("# insertions\torder\tterminal\n");
        for t in self.terms() {
            s.push_str(&t.to_string());
            s.push('\n');
        }
        s
    }

    /// Signed sum in operator notation.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.terms().iter().map(|t| t.render()).collect();
        parts.join(" ").replace(" +", " + ").replace(" -", " - ")
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("stopping order must be at least 1"));
    }
    if n > MAX_ORDER {
        return Err(Error::TooLarge {
            what: "stopping order",
            size: n,
            limit: MAX_ORDER,
        });
    }
    Ok(())
}

fn expand(prefix: &mut Vec<Insertion>, order: usize, n: usize, out: &mut Decomposition) {
    out.explicit_terms.push(ExpansionTerm {
        insertions: prefix.clone(),
        terminal: Terminal::Free,
    });
    for ins in [Insertion::Potential, Insertion::Bullet] {
        prefix.push(ins);
        let o = order + ins.order();
        if o >= n {
            out.remainder_terms.push(ExpansionTerm {
                insertions: prefix.clone(),
                terminal: Terminal::Full,
            });
        } else {
            expand(prefix, o, n, out);
        }
        prefix.pop();
    }
}

/// Terms produced by repeatedly expanding the trailing full resolvent.
pub fn generate_terms(n: usize) -> Result<Decomposition> {
    check_order(n)?;
    let mut d = Decomposition {
        n,
        explicit_terms: Vec::new(),
        remainder_terms: Vec::new(),
    };
    expand(&mut Vec::new(), 0, n, &mut d);
    d.explicit_terms.sort();
    d.remainder_terms.sort();
    Ok(d)
}

/// Same terms by filtering all insertion strings of order at most `N+1`.
pub fn generate_terms_direct(n: usize) -> Result<Decomposition> {
    check_order(n)?;
    let mut explicit_terms = Vec::new();
    let mut remainder_terms = Vec::new();
    let mut layer: Vec<Vec<Insertion>> = vec![Vec::new()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in layer {
            let order: usize = s.iter().map(|i| i.order()).sum();
            let prefix_order = order - s.last().map_or(0, |i| i.order());
            if order < n {
                explicit_terms.push(ExpansionTerm {
                    insertions: s.clone(),
                    terminal: Terminal::Free,
                });
            } else if prefix_order < n {
                remainder_terms.push(ExpansionTerm {
                    insertions: s.clone(),
                    terminal: Terminal::Full,
                });
            }
            if order <= n {
                for ins in [Insertion::Potential, Insertion::Bullet] {
                    let mut t = s.clone();
                    t.push(ins);
                    if t.iter().map(|i| i.order()).sum::<usize>() <= n + 1 {
                        next.push(t);
                    }
                }
            }
        }
        layer = next;
    }
    explicit_terms.sort();
    remainder_terms.sort();
    Ok(Decomposition {
        n,
        explicit_terms,
        remainder_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        for n in 1..=10 {
            assert_eq!(generate_terms(n).unwrap(), generate_terms_direct(n).unwrap(), "N={n}");
        }
        assert!(generate_terms(0).is_err());
        assert!(generate_terms(13).is_err());
    }

    #[test]
    fn first_order_decomposition() {
        let d = generate_terms(1).unwrap();
        assert_eq!(d.render(), "R_r - λ R_r V R - R_r σ R");
    }

    #[test]
    fn order_of_mixed_term() {
        use Insertion::*;
        let t = ExpansionTerm {
            insertions: vec![Bullet, Potential, Bullet],
            terminal: Terminal::Full,
        };
        assert_eq!(t.order(), 5);
        assert_eq!(t.render(), "-λ R_r σ R_r V R_r σ R");
    }
}
