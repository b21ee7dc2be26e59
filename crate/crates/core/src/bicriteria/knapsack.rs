/// Result of a 0/1 knapsack over processor counts.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    /// Indices into the input, ascending.
    pub selected: Vec<usize>,
    pub weight: f64,
}

/// Maximizes total weight subject to total allotment `<= m`.
///
/// `best[c]` is the best weight using at most `c` processors over the items
/// seen so far. The item is only taken when it strictly improves the value,
/// so backtracking prefers leaving items out on ties. O(n·m) time and bits.
pub fn knapsack_select(entries: &[(usize, f64)], m: usize) -> Selection {
    let n = entries.len();
    let width = m + 1;
    let mut best = vec![0.0f64; width];
    let mut take = vec![false; n * width];

    for (i, &(allot, weight)) in entries.iter().enumerate() {
        assert!(allot >= 1 && allot <= m, "allotment {allot} outside 1..={m}");
        let row = &mut take[i * width..(i + 1) * width];
        for c in (allot..=m).rev() {
            let with = best[c - allot] + weight;
            if with > best[c] {
                best[c] = with;
                row[c] = true;
            }
        }
    }

    let mut selected = Vec::new();
    let mut c = m;
    for i in (0..n).rev() {
        if take[i * width + c] {
            selected.push(i);
            c -= entries[i].0;
        }
    }
    selected.reverse();
    Selection {
        selected,
        weight: best[m],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn brute_force(entries: &[(usize, f64)], m: usize) -> f64 {
        (0u32..1 << entries.len())
            .filter_map(|mask| {
                let (a, w) = entries
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold((0, 0.0), |(a, w), (_, e)| (a + e.0, w + e.1));
                (a <= m).then_some(w)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn examples() {
        let s = knapsack_select(&[(1, 3.0), (1, 2.0), (1, 1.0)], 2);
        assert_eq!(s.selected, vec![0, 1]);
        assert_eq!(s.weight, 5.0);

        let e = [(3, 10.0), (2, 6.0), (2, 6.0)];
        assert_eq!(brute_force(&e, 4), 12.0);
        let s = knapsack_select(&e, 4);
        assert_eq!(s.selected, vec![1, 2]);
        assert_eq!(s.weight, 12.0);

        let s = knapsack_select(&[], 5);
        assert!(s.selected.is_empty());
        assert_eq!(s.weight, 0.0);
    }

    #[test]
    fn ties_leave_items_out() {
        // both subsets {0} and {1} weigh 2; the later item is not taken
        let s = knapsack_select(&[(1, 2.0), (1, 2.0)], 1);
        assert_eq!(s.selected, vec![0]);
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = Rng::seed_from_u64(5);
        for _ in 0..300 {
            let m = 1 + rng.below(12) as usize;
            let n = rng.below(13) as usize;
            let entries: Vec<(usize, f64)> = (0..n)
                .map(|_| (1 + rng.below(m as u64) as usize, rng.uniform(0.1, 10.0)))
                .collect();
            let s = knapsack_select(&entries, m);
            let used: usize = s.selected.iter().map(|&i| entries[i].0).sum();
            assert!(used <= m);
            let recomputed: f64 = s.selected.iter().map(|&i| entries[i].1).sum();
            assert!((recomputed - s.weight).abs() <= 1e-9 * s.weight.max(1.0));
            assert!((brute_force(&entries, m) - s.weight).abs() <= 1e-9 * s.weight.max(1.0));
        }
    }
}
