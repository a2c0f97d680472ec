//! Deterministic job-pool fan-out.
//!
//! Jobs are keyed by index; each derives its own RNG from
//! (base_seed, index), so results depend only on the index set, never on
//! scheduling. Workers take indices round-robin and the results are
//! reassembled in index order: worker counts cannot change any output
//! byte.

/// Number of workers: explicit argument, or the LOEWNER_LAB_WORKERS
/// environment variable, or 1.
pub fn worker_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| {
            std::env::var("LOEWNER_LAB_WORKERS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(1)
        .max(1)
}

/// Run `n_jobs` independent jobs on `workers` threads; returns results in
/// job-index order.
pub fn run_jobs<T, F>(n_jobs: u64, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = workers.clamp(1, n_jobs.max(1) as usize);
    if workers == 1 {
        return (0..n_jobs).map(job).collect();
    }
    let mut shards: Vec<Vec<(u64, T)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let job = &job;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut i = w as u64;
                    while i < n_jobs {
                        out.push((i, job(i)));
                        i += workers as u64;
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut all: Vec<(u64, T)> = shards.drain(..).flatten().collect();
    all.sort_by_key(|&(i, _)| i);
    all.into_iter().map(|(_, t)| t).collect()
}
