//! Sparse rational vectors stored as index-sorted `(index, value)` lists
//! with no explicit zeros.

use super::rat::Rat;

pub type SVec = Vec<(usize, Rat)>;

/// Drops zeros and sorts; combines duplicate indices.
pub fn normalize(mut v: SVec) -> SVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub fn from_dense(d: &[Rat]) -> SVec {
    d.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &[(usize, Rat)], n: usize) -> Vec<Rat> {
    let mut d = vec![Rat::zero(); n];
    for (i, x) in v {
        d[*i] = x.clone();
    }
    d
}

pub fn unit(i: usize) -> SVec {
    vec![(i, Rat::one())]
}

pub fn get(v: &[(usize, Rat)], i: usize) -> Rat {
    match v.binary_search_by_key(&i, |(j, _)| *j) {
        Ok(k) => v[k].1.clone(),
        Err(_) => Rat::zero(),
    }
}

pub fn get_ref(v: &[(usize, Rat)], i: usize) -> Option<&Rat> {
    v.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &v[k].1)
}

/// `a + s * b`.
pub fn axpy(a: &[(usize, Rat)], s: &Rat, b: &[(usize, Rat)]) -> SVec {
    if s.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, s * &b[j].1));
            j += 1;
        } else {
            let mut x = a[i].1.clone();
            x.add_mul(s, &b[j].1);
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn add(a: &[(usize, Rat)], b: &[(usize, Rat)]) -> SVec {
    axpy(a, &Rat::one(), b)
}

pub fn sub(a: &[(usize, Rat)], b: &[(usize, Rat)]) -> SVec {
    axpy(a, &Rat::int(-1), b)
}

pub fn scale(v: &[(usize, Rat)], s: &Rat) -> SVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * s)).collect()
}

pub fn dot(a: &[(usize, Rat)], b: &[(usize, Rat)]) -> Rat {
    let mut acc = Rat::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc.add_mul(&a[i].1, &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Dense accumulator for repeated sparse updates of one vector.
pub struct Accum {
    vals: Vec<Rat>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl Accum {
    pub fn new(n: usize) -> Self {
        Accum { vals: vec![Rat::zero(); n], touched: Vec::new(), mark: vec![false; n] }
    }

    #[inline]
    pub fn add_scaled(&mut self, s: &Rat, v: &[(usize, Rat)]) {
        if s.is_zero() {
            return;
        }
        for (i, x) in v {
            if !self.mark[*i] {
                self.mark[*i] = true;
                self.touched.push(*i);
            }
            self.vals[*i].add_mul(s, x);
        }
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, x: &Rat) {
        if x.is_zero() {
            return;
        }
        if !self.mark[i] {
            self.mark[i] = true;
            self.touched.push(i);
        }
        self.vals[i] += x;
    }

    /// Extracts the accumulated vector and resets the accumulator.
    pub fn take(&mut self) -> SVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.mark[i] = false;
            let x = std::mem::take(&mut self.vals[i]);
            if !x.is_zero() {
                out.push((i, x));
            }
        }
        self.touched.clear();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[(usize, i64)]) -> SVec {
        xs.iter().map(|&(i, x)| (i, Rat::int(x))).collect()
    }

    #[test]
    fn axpy_cancels() {
        let a = v(&[(0, 1), (2, 3)]);
        let b = v(&[(1, 5), (2, 1)]);
        assert_eq!(axpy(&a, &Rat::int(-3), &b), v(&[(0, 1), (1, -15)]));
    }

    #[test]
    fn accumulator_resets() {
        let mut acc = Accum::new(4);
        acc.add_scaled(&Rat::int(2), &v(&[(3, 1), (1, 1)]));
        acc.add_at(1, &Rat::int(-2));
        assert_eq!(acc.take(), v(&[(3, 2)]));
        assert_eq!(acc.take(), v(&[]));
    }
}
