use crate::error::{check_index, check_rank, Error, Result};

/// An element of the type C_m Weyl group, acting on `{0, ..., 2m-1}` by
/// permutations that commute with `j -> 2m-1-j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    m: usize,
    images: Vec<usize>,
}

impl SignedPerm {
    pub fn identity(m: usize) -> Self {
        Self {
            m,
            images: (0..2 * m).collect(),
        }
    }

    /// Simple reflection `s_i`, `1 <= i <= m`.
    pub fn simple(m: usize, i: usize) -> Self {
        let mut w = Self::identity(m);
        let n = 2 * m;
        if i < m {
            w.images.swap(i - 1, i);
            w.images.swap(n - i - 1, n - i);
        } else {
            w.images.swap(m - 1, m);
        }
        w
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m: self.m,
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn left_mul_simple(&self, i: usize) -> Self {
        Self::simple(self.m, i).compose(self)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Coxeter length: half of (inversions + entries of the first half sent
    /// to the second half).
    pub fn length(&self) -> usize {
        let n = self.images.len();
        let mut inv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    inv += 1;
                }
            }
        }
        let crossing = self.images[..self.m]
            .iter()
            .filter(|&&v| v >= self.m)
            .count();
        (inv + crossing) / 2
    }

    pub fn from_word(m: usize, word: &[usize]) -> Self {
        word.iter()
            .fold(Self::identity(m), |w, &i| w.compose(&Self::simple(m, i)))
    }

    /// Reduced word by repeatedly stripping the smallest left descent.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(w.length());
        while !w.is_identity() {
            let len = w.length();
            let i = (1..=self.m)
                .find(|&i| w.left_mul_simple(i).length() < len)
                .expect("a nontrivial element has a left descent");
            word.push(i);
            w = w.left_mul_simple(i);
        }
        word
    }

    /// Longest element of the subgroup generated by `gens`.
    pub fn longest(m: usize, gens: &[usize]) -> Self {
        let mut w = Self::identity(m);
        loop {
            let len = w.length();
            match gens.iter().find(|&&i| w.left_mul_simple(i).length() > len) {
                Some(&i) => w = w.left_mul_simple(i),
                None => return w,
            }
        }
    }
}

/// A word in the simple reflections `s_1, ..., s_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylWord {
    m: usize,
    letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(m: usize, letters: Vec<usize>) -> Result<Self> {
        check_rank(m)?;
        for &i in &letters {
            check_index("simple reflection", i, 1, m)?;
        }
        Ok(Self { m, letters })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn permutation(&self) -> SignedPerm {
        SignedPerm::from_word(self.m, &self.letters)
    }

    pub fn is_reduced(&self) -> bool {
        self.permutation().length() == self.letters.len()
    }
}

/// Named Weyl group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylSelector {
    /// `w_k`, the minimal representative labelling the `k`-th coordinate.
    Coordinate(usize),
    /// Longest element of the parabolic subgroup `<s_2, ..., s_m>`.
    ParabolicLongest,
    /// `s_1 s_2 ... s_m ... s_2 s_1`.
    MinimalCoset,
    /// Longest element of the whole group.
    Longest,
}

impl std::str::FromStr for WeylSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w_P" | "wP" => Ok(Self::ParabolicLongest),
            "w_hat_P" | "w^P" => Ok(Self::MinimalCoset),
            "w_0" | "w0" => Ok(Self::Longest),
            other => other
                .strip_prefix("w_")
                .or_else(|| other.strip_prefix('w'))
                .and_then(|k| k.parse().ok())
                .map(Self::Coordinate)
                .ok_or_else(|| Error::Json(format!("unknown Weyl element `{other}`"))),
        }
    }
}

pub fn weyl_word(m: usize, which: WeylSelector) -> Result<WeylWord> {
    check_rank(m)?;
    let letters = match which {
        WeylSelector::Coordinate(k) => {
            check_index("coordinate", k, 0, 2 * m - 1)?;
            if k <= m {
                (1..=k).rev().collect()
            } else {
                let mut w: Vec<usize> = (2 * m - k..m).collect();
                w.push(m);
                w.extend((1..m).rev());
                w
            }
        }
        WeylSelector::MinimalCoset => (1..=m).chain((1..m).rev()).collect(),
        WeylSelector::ParabolicLongest => {
            let gens: Vec<usize> = (2..=m).collect();
            SignedPerm::longest(m, &gens).reduced_word()
        }
        WeylSelector::Longest => {
            let gens: Vec<usize> = (1..=m).collect();
            SignedPerm::longest(m, &gens).reduced_word()
        }
    };
    WeylWord::new(m, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_reflections_have_length_one() {
        for m in 2..=5 {
            for i in 1..=m {
                assert_eq!(SignedPerm::simple(m, i).length(), 1, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn named_words() {
        assert_eq!(
            weyl_word(2, WeylSelector::Coordinate(3)).unwrap().letters(),
            &[1, 2, 1]
        );
        assert_eq!(
            weyl_word(3, WeylSelector::MinimalCoset).unwrap().letters(),
            &[1, 2, 3, 2, 1]
        );
        let w0 = weyl_word(2, WeylSelector::Longest).unwrap();
        assert_eq!(w0.len(), 4);
        assert!(w0.is_reduced());
        assert_eq!(
            weyl_word(2, WeylSelector::ParabolicLongest)
                .unwrap()
                .letters(),
            &[2]
        );
    }

    #[test]
    fn longest_lengths_and_reducedness() {
        for m in 2..=5 {
            let w0 = weyl_word(m, WeylSelector::Longest).unwrap();
            assert_eq!(w0.len(), m * m);
            assert!(w0.is_reduced());
            let wp = weyl_word(m, WeylSelector::ParabolicLongest).unwrap();
            assert_eq!(wp.len(), (m - 1) * (m - 1));
            assert!(wp.is_reduced());
            let hat = weyl_word(m, WeylSelector::MinimalCoset).unwrap();
            assert_eq!(hat.len(), 2 * m - 1);
            assert!(hat.is_reduced());
            // w_0 = w^P w_P as a length-additive product.
            let prod = hat.permutation().compose(&wp.permutation());
            assert_eq!(prod, w0.permutation());
            for k in 0..2 * m {
                let wk = weyl_word(m, WeylSelector::Coordinate(k)).unwrap();
                assert_eq!(wk.len(), k);
                assert!(wk.is_reduced(), "w_{k} at m={m}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(weyl_word(1, WeylSelector::Longest).is_err());
        assert!(weyl_word(2, WeylSelector::Coordinate(4)).is_err());
        assert!(WeylWord::new(2, vec![3]).is_err());
        assert!("w_x".parse::<WeylSelector>().is_err());
        assert_eq!(
            "w_3".parse::<WeylSelector>().unwrap(),
            WeylSelector::Coordinate(3)
        );
    }
}
