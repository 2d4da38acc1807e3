use alloc::vec::Vec;

/// Abscissa used for a fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// `ceil(log2 n)`.
    Log,
    /// `ceil(log2(ceil(log2 n) + 2))`.
    LogLog,
}

pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        u64::from(64 - (n - 1).leading_zeros())
    }
}

impl Scale {
    pub fn at(self, n: u64) -> u64 {
        match self {
            Scale::Log => ceil_log2(n),
            Scale::LogLog => ceil_log2(ceil_log2(n) + 2),
        }
    }
}

/// Fitted `extent <= c1 * scale(n) + c0` over a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFit {
    pub scale: Scale,
    /// `(n, max extent)`, sorted by `n`, one row per size.
    pub rows: Vec<(u64, u64)>,
    /// Smallest integer slope not below any secant between rows.
    pub c1: u64,
    /// Smallest intercept making the bound hold for `c1`.
    pub c0: i64,
    /// Whether the extents never decrease as `n` grows.
    pub monotone: bool,
}

impl SpaceFit {
    pub fn bound(&self, n: u64) -> i64 {
        (self.c1 * self.scale.at(n)) as i64 + self.c0
    }

    pub fn holds(&self, n: u64, extent: u64) -> bool {
        extent as i64 <= self.bound(n)
    }
}

/// Fits a bound to `(n, extent)` samples. Several samples for one size keep
/// the largest extent.
pub fn space_audit(samples: &[(u64, u64)], scale: Scale) -> SpaceFit {
    let mut rows: Vec<(u64, u64)> = Vec::new();
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    for (n, e) in sorted {
        match rows.last_mut() {
            Some(last) if last.0 == n => last.1 = last.1.max(e),
            _ => rows.push((n, e)),
        }
    }
    let mut c1 = 0u64;
    for (i, &(ni, ei)) in rows.iter().enumerate() {
        for &(nj, ej) in &rows[i + 1..] {
            let (li, lj) = (scale.at(ni), scale.at(nj));
            if lj > li && ej > ei {
                c1 = c1.max((ej - ei).div_ceil(lj - li));
            }
        }
    }
    let c0 = rows
        .iter()
        .map(|&(n, e)| e as i64 - (c1 * scale.at(n)) as i64)
        .max()
        .unwrap_or(0);
    let monotone = rows.windows(2).all(|w| w[0].1 <= w[1].1);
    SpaceFit {
        scale,
        rows,
        c1,
        c0,
        monotone,
    }
}
