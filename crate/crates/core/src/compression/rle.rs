//! Run-length encoding.

/// Maximal runs `(symbol, run length)`; adjacent symbols differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlePairs<T> {
    pub pairs: Vec<(T, usize)>,
}

impl<T: Clone> RlePairs<T> {
    /// Number of pairs, `N_RLE`.
    pub fn n_rle(&self) -> usize {
        self.pairs.len()
    }

    pub fn source_len(&self) -> usize {
        self.pairs.iter().map(|(_, run)| run).sum()
    }

    pub fn expand(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.source_len());
        for (sym, run) in &self.pairs {
            out.extend(std::iter::repeat_n(sym.clone(), *run));
        }
        out
    }
}

pub fn rle_encode<T: PartialEq + Clone>(s: &[T]) -> RlePairs<T> {
    let mut pairs: Vec<(T, usize)> = Vec::new();
    for sym in s {
        match pairs.last_mut() {
            Some((last, run)) if last == sym => *run += 1,
            _ => pairs.push((sym.clone(), 1)),
        }
    }
    RlePairs { pairs }
}

/// `N_RLE` without materialising the pairs.
pub fn count_runs<T: PartialEq>(s: &[T]) -> usize {
    if s.is_empty() {
        return 0;
    }
    1 + s.windows(2).filter(|w| w[0] != w[1]).count()
}
