use ratmath::{dot, RatMatrix, Rational};
use num_traits::Zero;

/// `q(y) = c + bᵀy + yᵀQy` with `Q` symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFunc {
    pub constant: Rational,
    pub linear: Vec<Rational>,
    pub quadratic: RatMatrix,
}

impl QuadraticFunc {
    pub fn zero(n: usize) -> Self {
        QuadraticFunc {
            constant: Rational::zero(),
            linear: vec![Rational::zero(); n],
            quadratic: RatMatrix::zeros(n, n),
        }
    }

    pub fn affine(constant: Rational, linear: Vec<Rational>) -> Self {
        let n = linear.len();
        QuadraticFunc {
            constant,
            linear,
            quadratic: RatMatrix::zeros(n, n),
        }
    }

    pub fn new(constant: Rational, linear: Vec<Rational>, quadratic: RatMatrix) -> Self {
        QuadraticFunc {
            constant,
            linear,
            quadratic,
        }
    }

    /// `y_j` as a function on `n` variables.
    pub fn coordinate(n: usize, j: usize) -> Self {
        let mut f = Self::zero(n);
        f.linear[j] = Rational::from_integer(1.into());
        f
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, y: &[Rational]) -> Rational {
        assert_eq!(y.len(), self.dim(), "eval: dimension mismatch");
        let qy = self.quadratic.mul_vec(y);
        &self.constant + dot(&self.linear, y) + dot(y, &qy)
    }

    /// `b + 2 Q y`.
    pub fn gradient(&self, y: &[Rational]) -> Vec<Rational> {
        let qy = self.quadratic.mul_vec(y);
        self.linear
            .iter()
            .zip(&qy)
            .map(|(b, q)| b + q + q)
            .collect()
    }

    pub fn is_affine(&self) -> bool {
        self.quadratic.is_zero()
    }

    /// True when the value can change with `y_j`.
    pub fn depends_on(&self, j: usize) -> bool {
        !self.linear[j].is_zero() || (0..self.dim()).any(|k| !self.quadratic[(j, k)].is_zero() || !self.quadratic[(k, j)].is_zero())
    }

    /// `x ↦ q(A x + shift)` for `A` of shape `dim × k`.
    pub fn compose(&self, a: &RatMatrix, shift: Option<&[Rational]>) -> QuadraticFunc {
        assert_eq!(a.rows(), self.dim(), "compose: shape mismatch");
        let zero_shift = vec![Rational::zero(); self.dim()];
        let s = shift.unwrap_or(&zero_shift);
        let constant = self.eval(s);
        let g = self.gradient(s);
        let linear = a.tr_mul_vec(&g);
        let quadratic = a.transpose().mul(&self.quadratic).mul(a);
        QuadraticFunc {
            constant,
            linear,
            quadratic,
        }
    }

    pub fn add(&self, other: &QuadraticFunc) -> QuadraticFunc {
        assert_eq!(self.dim(), other.dim(), "add: dimension mismatch");
        QuadraticFunc {
            constant: &self.constant + &other.constant,
            linear: self.linear.iter().zip(&other.linear).map(|(a, b)| a + b).collect(),
            quadratic: self.quadratic.add(&other.quadratic),
        }
    }

    pub fn scale(&self, k: &Rational) -> QuadraticFunc {
        QuadraticFunc {
            constant: &self.constant * k,
            linear: self.linear.iter().map(|a| a * k).collect(),
            quadratic: self.quadratic.scale(k),
        }
    }

    pub fn sub(&self, other: &QuadraticFunc) -> QuadraticFunc {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    /// Builds a function on the block `(t_1..t_{n_t}, z_1..z_s)` from monomial keys:
    /// `"1"`, `"t2"`, `"z1"`, `"t1*z1"`, `"t1^2"`. Here `z_i` names the `|z̃_i|` slot.
    pub fn from_monomials<'a, I>(n_t: usize, s: usize, terms: I) -> Result<QuadraticFunc, String>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut f = QuadraticFunc::zero(n_t + s);
        let half = Rational::new(1.into(), 2.into());
        for (key, coef) in terms {
            let vars = parse_monomial(key, n_t, s)?;
            match vars.as_slice() {
                [] => f.constant += coef,
                [j] => f.linear[*j] += coef,
                [j, k] if j == k => f.quadratic[(*j, *j)] += coef,
                [j, k] => {
                    let h = &coef * &half;
                    f.quadratic[(*j, *k)] += h.clone();
                    f.quadratic[(*k, *j)] += h;
                }
                _ => return Err(format!("monomial '{key}' has degree above 2")),
            }
        }
        Ok(f)
    }

    /// Inverse of [`QuadraticFunc::from_monomials`], skipping zero coefficients.
    pub fn to_monomials(&self, n_t: usize) -> Vec<(String, Rational)> {
        let names: Vec<String> = (0..self.dim())
            .map(|j| if j < n_t { format!("t{}", j + 1) } else { format!("z{}", j - n_t + 1) })
            .collect();
        self.to_named_monomials(&names)
    }

    /// Monomial list with caller-supplied variable names.
    pub fn to_named_monomials(&self, names: &[String]) -> Vec<(String, Rational)> {
        assert_eq!(names.len(), self.dim(), "to_named_monomials: one name per variable");
        let mut out = Vec::new();
        if !self.constant.is_zero() {
            out.push(("1".to_string(), self.constant.clone()));
        }
        for (j, b) in self.linear.iter().enumerate() {
            if !b.is_zero() {
                out.push((names[j].clone(), b.clone()));
            }
        }
        for j in 0..self.dim() {
            if !self.quadratic[(j, j)].is_zero() {
                out.push((format!("{}^2", names[j]), self.quadratic[(j, j)].clone()));
            }
            for k in j + 1..self.dim() {
                let c = &self.quadratic[(j, k)] + &self.quadratic[(k, j)];
                if !c.is_zero() {
                    out.push((format!("{}*{}", names[j], names[k]), c));
                }
            }
        }
        out
    }
}

fn parse_var(v: &str, n_t: usize, s: usize) -> Result<usize, String> {
    let v = v.trim();
    let (base, limit, offset) = match v.chars().next() {
        Some('t') => (&v[1..], n_t, 0),
        Some('z') => (&v[1..], s, n_t),
        _ => return Err(format!("unknown variable '{v}'")),
    };
    let idx: usize = base.parse().map_err(|_| format!("unknown variable '{v}'"))?;
    if idx == 0 || idx > limit {
        return Err(format!("variable '{v}' out of range"));
    }
    Ok(offset + idx - 1)
}

fn parse_monomial(key: &str, n_t: usize, s: usize) -> Result<Vec<usize>, String> {
    let key = key.trim();
    if key == "1" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for factor in key.split('*') {
        match factor.split_once('^') {
            Some((v, "2")) => {
                let j = parse_var(v, n_t, s)?;
                out.extend([j, j]);
            }
            Some((_, e)) => return Err(format!("unsupported exponent '{e}' in '{key}'")),
            None => out.push(parse_var(factor, n_t, s)?),
        }
    }
    Ok(out)
}
