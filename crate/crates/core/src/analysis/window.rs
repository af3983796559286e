use std::collections::VecDeque;

/// Maxima and minima of every length-`k` window of `values`: element `i` of
/// each output covers `values[i..i + k]`. Monotone deques give `O(n)` total.
pub fn window_extrema(values: &[f64], k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1, "window length must be positive");
    if values.len() < k {
        return (Vec::new(), Vec::new());
    }
    let out_len = values.len() - k + 1;
    let mut maxs = Vec::with_capacity(out_len);
    let mut mins = Vec::with_capacity(out_len);
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut lo: VecDeque<usize> = VecDeque::new();
    for (i, &v) in values.iter().enumerate() {
        while hi.back().is_some_and(|&j| values[j] <= v) {
            hi.pop_back();
        }
        hi.push_back(i);
        while lo.back().is_some_and(|&j| values[j] >= v) {
            lo.pop_back();
        }
        lo.push_back(i);
        if i + 1 >= k {
            let start = i + 1 - k;
            while hi[0] < start {
                hi.pop_front();
            }
            while lo[0] < start {
                lo.pop_front();
            }
            maxs.push(values[hi[0]]);
            mins.push(values[lo[0]]);
        }
    }
    (maxs, mins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_brute_force(values in prop::collection::vec(-5i32..5, 1..200), k in 1usize..20) {
            let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
            let (maxs, mins) = window_extrema(&v, k);
            prop_assert_eq!(maxs.len(), if v.len() >= k { v.len() - k + 1 } else { 0 });
            for (i, (mx, mn)) in maxs.iter().zip(&mins).enumerate() {
                let w = &v[i..i + k];
                prop_assert_eq!(*mx, w.iter().cloned().fold(f64::MIN, f64::max));
                prop_assert_eq!(*mn, w.iter().cloned().fold(f64::MAX, f64::min));
            }
        }
    }
}
