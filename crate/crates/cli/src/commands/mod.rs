pub mod applications;
pub mod design;
pub mod simulate;
pub mod sweep;

use crate::error::CliError;

/// Worker pool size from `MODRABI_THREADS`, defaulting to the available cores.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var("MODRABI_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(CliError::validation("MODRABI_THREADS", format!("expected a positive integer, got {v:?}"))),
        },
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::validation("MODRABI_THREADS", e))
}
