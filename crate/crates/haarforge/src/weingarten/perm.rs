//! Permutations of `{0, .., p-1}` in one-line form.

use super::Partition;

pub type Perm = Vec<u8>;

/// All permutations of `p` points in lexicographic order.
pub fn all_perms(p: usize) -> Vec<Perm> {
    let mut cur: Perm = (0..p as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        // Next lexicographic permutation.
        let Some(i) = (0..p.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..p).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// `(a b)(x) = a(b(x))`.
pub fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn inverse(a: &[u8]) -> Perm {
    let mut inv = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

/// Cycle lengths, descending.
pub fn cycle_type(a: &[u8]) -> Partition {
    let mut seen = vec![false; a.len()];
    let mut parts = Vec::new();
    for start in 0..a.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = a[x] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

pub fn num_cycles(a: &[u8]) -> usize {
    cycle_type(a).len()
}

/// The long cycle `k -> k+1 mod p`.
pub fn long_cycle(p: usize) -> Perm {
    (0..p).map(|k| ((k + 1) % p) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_types() {
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(all_perms(1), vec![vec![0]]);
        assert_eq!(cycle_type(&long_cycle(5)).parts(), &[5]);
        let s = vec![1u8, 0, 2, 4, 3];
        assert_eq!(cycle_type(&s).parts(), &[2, 2, 1]);
        assert_eq!(compose(&s, &inverse(&s)), (0..5).collect::<Vec<u8>>());
    }
}
