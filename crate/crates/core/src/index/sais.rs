//! Suffix array construction by induced sorting (SA-IS), over an integer
//! alphabet `0..=upper`.

const EMPTY: u32 = u32::MAX;
const NAIVE_THRESHOLD: usize = 16;

/// Suffix array of `s` (0-based positions). Every value of `s` must be at most `upper`.
pub fn suffix_array(s: &[u32], upper: u32) -> Vec<u32> {
    assert!(s.len() < EMPTY as usize, "text too long for 32-bit suffix array");
    sa_is(s, upper as usize)
}

fn sa_naive(s: &[u32]) -> Vec<u32> {
    let mut sa: Vec<u32> = (0..s.len() as u32).collect();
    sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
    sa
}

fn sa_is(s: &[u32], upper: usize) -> Vec<u32> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        _ if n < NAIVE_THRESHOLD => return sa_naive(s),
        _ => {}
    }

    // ls[i]: suffix i is S-type (smaller than suffix i + 1).
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] {
            ls[i + 1]
        } else {
            s[i] < s[i + 1]
        };
    }

    // sum_l[c]: start of bucket c; sum_s[c]: start of the S-part of bucket c.
    let mut sum_l = vec![0usize; upper + 2];
    let mut sum_s = vec![0usize; upper + 2];
    for i in 0..n {
        let c = s[i] as usize;
        if !ls[i] {
            sum_s[c] += 1;
        } else {
            sum_l[c + 1] += 1;
        }
    }
    for c in 0..=upper {
        sum_s[c] += sum_l[c];
        if c < upper {
            sum_l[c + 1] += sum_s[c];
        }
    }

    let mut sa = vec![EMPTY; n];
    let mut buf = vec![0usize; upper + 2];
    let mut induce = |sa: &mut [u32], lms: &[u32]| {
        sa.fill(EMPTY);
        buf.copy_from_slice(&sum_s);
        for &d in lms {
            let d = d as usize;
            if d == n {
                continue;
            }
            let c = s[d] as usize;
            sa[buf[c]] = d as u32;
            buf[c] += 1;
        }
        buf.copy_from_slice(&sum_l);
        let c = s[n - 1] as usize;
        sa[buf[c]] = (n - 1) as u32;
        buf[c] += 1;
        for i in 0..n {
            let v = sa[i];
            if v != EMPTY && v >= 1 && !ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize;
                sa[buf[c]] = v - 1;
                buf[c] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != EMPTY && v >= 1 && ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize + 1;
                buf[c] -= 1;
                sa[buf[c]] = v - 1;
            }
        }
    };

    let mut lms_map = vec![EMPTY; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len() as u32;
            lms.push(i as u32);
        }
    }
    let m = lms.len();

    induce(&mut sa, &lms);

    if m > 0 {
        let sorted_lms: Vec<u32> = sa
            .iter()
            .copied()
            .filter(|&v| lms_map[v as usize] != EMPTY)
            .collect();
        let mut rec_s = vec![0u32; m];
        let mut rec_upper = 0u32;
        rec_s[lms_map[sorted_lms[0] as usize] as usize] = 0;
        for i in 1..m {
            let mut l = sorted_lms[i - 1] as usize;
            let mut r = sorted_lms[i] as usize;
            let next = |p: usize| {
                let k = lms_map[p] as usize + 1;
                if k < m {
                    lms[k] as usize
                } else {
                    n
                }
            };
            let end_l = next(l);
            let end_r = next(r);
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l {
                    if s[l] != s[r] {
                        break;
                    }
                    l += 1;
                    r += 1;
                }
                if l == n || r == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[i] as usize] as usize] = rec_upper;
        }

        let rec_sa = sa_is(&rec_s, rec_upper as usize);
        let sorted_lms: Vec<u32> = rec_sa.iter().map(|&i| lms[i as usize]).collect();
        induce(&mut sa, &sorted_lms);
    }
    sa
}

/// Kasai's LCP construction. `lcp[0] = 0`; `lcp[p]` is the longest common
/// prefix of the suffixes at ranks `p - 1` and `p`.
pub fn lcp_array<T: Eq>(s: &[T], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut rank = vec![0u32; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn banana() {
        let s: Vec<u32> = b"banana".iter().map(|&b| u32::from(b)).collect();
        assert_eq!(suffix_array(&s, 255), vec![5, 3, 1, 0, 4, 2]);
    }

    #[test]
    fn long_unary_and_periodic() {
        let s = vec![3u32; 1000];
        let sa = suffix_array(&s, 3);
        assert_eq!(sa, (0..1000u32).rev().collect::<Vec<_>>());
        let s: Vec<u32> = (0..999).map(|i| (i % 3) as u32).collect();
        assert_eq!(suffix_array(&s, 2), sa_naive(&s));
    }

    #[test]
    fn lcp_unary() {
        let s = [0u32; 3];
        let sa = suffix_array(&s, 0);
        assert_eq!(lcp_array(&s, &sa), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn matches_naive_sort(s in proptest::collection::vec(0u32..4, 1..300)) {
            prop_assert_eq!(suffix_array(&s, 3), sa_naive(&s));
        }

        #[test]
        fn matches_naive_sort_wide(s in proptest::collection::vec(0u32..600, 1..200)) {
            prop_assert_eq!(suffix_array(&s, 599), sa_naive(&s));
        }

        #[test]
        fn lcp_matches_direct(s in proptest::collection::vec(0u32..3, 1..200)) {
            let sa = suffix_array(&s, 2);
            let lcp = lcp_array(&s, &sa);
            for p in 1..s.len() {
                let a = &s[sa[p - 1] as usize..];
                let b = &s[sa[p] as usize..];
                let direct = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                prop_assert_eq!(lcp[p] as usize, direct);
            }
        }
    }
}
