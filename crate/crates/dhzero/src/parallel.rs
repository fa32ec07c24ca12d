//! Fan-out over contiguous index ranges with an ordered merge.

use std::ops::Range;
use std::thread;

/// Splits 0..n into at most `workers` contiguous ranges of near-equal size.
pub fn split(n: usize, workers: usize) -> Vec<Range<usize>> {
    let parts = workers.clamp(1, n.max(1));
    let base = n / parts;
    let extra = n % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for k in 0..parts {
        let len = base + usize::from(k < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Runs `job` on each range, one thread per range, and concatenates the
/// results in range order. The first error in range order wins.
pub fn map_ranges<T, E, F>(n: usize, workers: usize, job: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(Range<usize>) -> Result<Vec<T>, E> + Sync,
{
    let ranges = split(n, workers);
    if ranges.len() == 1 {
        return job(ranges[0].clone());
    }
    let results: Vec<Result<Vec<T>, E>> = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let job = &job;
                scope.spawn(move || job(r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(n);
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_covers_range() {
        for n in 0..20 {
            for w in 1..10 {
                let parts = split(n, w);
                let joined: Vec<usize> = parts.iter().flat_map(|r| r.clone()).collect();
                assert_eq!(joined, (0..n).collect::<Vec<_>>());
                assert!(parts.len() <= w.max(1));
            }
        }
    }

    #[test]
    fn merge_is_ordered() {
        let v: Result<Vec<usize>, ()> = map_ranges(37, 5, |r| Ok(r.map(|k| k * k).collect()));
        assert_eq!(v.unwrap(), (0..37).map(|k| k * k).collect::<Vec<_>>());
    }
}
