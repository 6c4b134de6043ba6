use crate::quadratic::QuadraticFunc;
use serde::Serialize;
use std::fmt;

/// Abs-normal NLP with quadratic data.
///
/// `f` is a function of `t`; every constraint function is a function of the block
/// `(t, ζ)` of length `n_t + s`, where `ζ` stands for `|z̃|`. The switching equation
/// reads `z̃ = c_Z(t, |z̃|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsNormalProgram {
    pub n_t: usize,
    pub s: usize,
    pub f: QuadraticFunc,
    pub c_e: Vec<QuadraticFunc>,
    pub c_i: Vec<QuadraticFunc>,
    pub c_z: Vec<QuadraticFunc>,
    /// Smoothness degree of the modelled functions. Metadata only.
    pub smoothness: u32,
}

impl AbsNormalProgram {
    pub fn m1(&self) -> usize {
        self.c_e.len()
    }

    pub fn m2(&self) -> usize {
        self.c_i.len()
    }

    /// Width of the `(t, ζ)` block.
    pub fn block(&self) -> usize {
        self.n_t + self.s
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

/// Checks dimensions, symmetry and the strictly lower triangular switching structure.
/// Indices in messages are 1-based.
pub fn validate(p: &AbsNormalProgram) -> ValidationReport {
    let mut v = Vec::new();
    if p.c_z.len() != p.s {
        v.push(format!("cZ has {} components, expected s = {}", p.c_z.len(), p.s));
    }
    check_func(&mut v, "f", &p.f, p.n_t);
    for (fam, funcs) in [("cE", &p.c_e), ("cI", &p.c_i), ("cZ", &p.c_z)] {
        for (i, q) in funcs.iter().enumerate() {
            check_func(&mut v, &format!("{fam}{}", i + 1), q, p.block());
        }
    }
    for (i, q) in p.c_z.iter().enumerate() {
        if q.dim() != p.block() || !q.quadratic.is_symmetric() {
            continue;
        }
        for j in i..p.s {
            if q.depends_on(p.n_t + j) {
                v.push(format!("triangularity violation at ({},{})", i + 1, j + 1));
            }
        }
    }
    ValidationReport { violations: v }
}

fn check_func(v: &mut Vec<String>, name: &str, q: &QuadraticFunc, n: usize) {
    if q.linear.len() != n {
        v.push(format!("{name}: linear part has length {}, expected {n}", q.linear.len()));
    }
    if q.quadratic.rows() != n || q.quadratic.cols() != n {
        v.push(format!(
            "{name}: quadratic part is {}x{}, expected {n}x{n}",
            q.quadratic.rows(),
            q.quadratic.cols()
        ));
    } else if !q.quadratic.is_symmetric() {
        v.push(format!("{name}: symmetry violation in quadratic part"));
    }
}

/// Entries in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignatureVector(pub Vec<i8>);

impl SignatureVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_definite(&self) -> bool {
        self.0.iter().all(|&x| x != 0)
    }

    /// `self ⪰ other`, i.e. `self_i · other_i ≥ other_i²` for every entry.
    pub fn succeq(&self, other: &SignatureVector) -> bool {
        self.len() == other.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(&a, &b)| (a as i32) * (b as i32) >= (b as i32) * (b as i32))
    }

    /// Parses `"+-0"`-style strings.
    pub fn parse(s: &str) -> Option<SignatureVector> {
        s.chars()
            .map(|c| match c {
                '+' => Some(1),
                '-' => Some(-1),
                '0' => Some(0),
                _ => None,
            })
            .collect::<Option<Vec<i8>>>()
            .map(SignatureVector)
    }
}

impl fmt::Display for SignatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            f.write_str(match x {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

impl Serialize for SignatureVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
