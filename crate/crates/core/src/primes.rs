//! Primes by trial division.

/// Trial division up to the square root.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q < 4 {
        return true;
    }
    if q.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d <= q / d {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Ascending primes starting from `n^2`, found by testing every integer
/// candidate in turn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeStream {
    start: u64,
    primes: Vec<u64>,
}

impl PrimeStream {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.primes
    }
}

/// The first `count` primes `>= n^2`.
pub fn gen_primes(n: usize, count: usize) -> PrimeStream {
    assert!(n >= 1, "n must be positive");
    let start = (n as u64) * (n as u64);
    let primes = (start..).filter(|&q| is_prime(q)).take(count).collect();
    PrimeStream { start, primes }
}
