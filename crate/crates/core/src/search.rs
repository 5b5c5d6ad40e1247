//! Subset enumeration in size-then-lexicographic order.

/// All `k`-element subsets of `0..n` as ascending index lists, in
/// lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if k <= n { Some((0..k).collect::<Vec<_>>()) } else { None };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut c = current.clone();
        // Advance to the lexicographic successor.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                next = Some(c);
                break;
            }
        }
        Some(current)
    })
}

/// Subsets of `0..n` with size in `min..=max`, smallest first.
pub fn subsets_by_size(n: usize, min: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    (min..=max.min(n)).flat_map(move |k| combinations(n, k))
}

/// Every tuple in the product of `sizes`, first position most significant.
pub fn product(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut next = if sizes.iter().all(|&s| s > 0) {
        Some(vec![0; sizes.len()])
    } else {
        None
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut c = current.clone();
        let mut i = sizes.len();
        while i > 0 {
            i -= 1;
            c[i] += 1;
            if c[i] < sizes[i] {
                next = Some(c);
                break;
            }
            c[i] = 0;
        }
        Some(current)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_order() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(subsets_by_size(5, 0, 5).count(), 32);
    }

    #[test]
    fn product_is_lexicographic() {
        let all: Vec<_> = product(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
        assert_eq!(product(&[]).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }
}
