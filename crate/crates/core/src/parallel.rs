use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "QCAP_THREADS";

/// Worker pool sized by `QCAP_THREADS` when it holds a positive integer,
/// otherwise by rayon's default.
pub fn thread_pool() -> ThreadPool {
    let requested = std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    let mut builder = ThreadPoolBuilder::new();
    if let Some(n) = requested {
        builder = builder.num_threads(n);
    }
    builder.build().expect("thread pool")
}
