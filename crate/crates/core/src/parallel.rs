//! Ordered fan-out over scoped threads; sequential on targets without them.

/// `items.iter().map(f)` with one worker per item, results in input order.
pub fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if cfg!(target_arch = "wasm32") || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = items.iter().map(|item| scope.spawn(move || f(item))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_order() {
        let v: Vec<u64> = (0..50).collect();
        assert_eq!(map_ordered(&v, |x| x * x), v.iter().map(|x| x * x).collect::<Vec<_>>());
        assert!(map_ordered(&[] as &[u8], |x| *x).is_empty());
    }
}
