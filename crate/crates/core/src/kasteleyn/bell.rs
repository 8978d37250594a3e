//! Complete Bell polynomials: raw moments from cumulants.

/// `Y_0 .. Y_lmax` evaluated at `cumulants[0] = L_1, cumulants[1] = L_2, ...`.
pub fn complete_bell(cumulants: &[f64]) -> Vec<f64> {
    let lmax = cumulants.len();
    let mut y = vec![0.0; lmax + 1];
    y[0] = 1.0;
    for l in 0..lmax {
        // Y_{l+1} = sum_i C(l, i) Y_{l-i} L_{i+1}
        let mut acc = 0.0;
        let mut binom = 1.0;
        for i in 0..=l {
            acc += binom * y[l - i] * cumulants[i];
            binom = binom * (l - i) as f64 / (i + 1) as f64;
        }
        y[l + 1] = acc;
    }
    y
}

fn factorial(k: u32) -> u128 {
    (1..=u128::from(k)).product()
}

/// Coefficient of `L_{s_1} L_{s_2} ...` in `Y_l`, `l` the sum of the parts:
/// `l! / prod_i (s_i!^{r_i} r_i!)` over distinct sizes `s_i` of multiplicity `r_i`.
///
/// # Panics
/// On an empty partition, a zero part, or a total above 20.
pub fn bell_coefficient(partition: &[u32]) -> u64 {
    assert!(!partition.is_empty(), "empty partition");
    assert!(partition.iter().all(|&s| s > 0), "zero part");
    let total: u32 = partition.iter().sum();
    assert!(total <= 20, "partition of {total} too large");
    let mut sizes = partition.to_vec();
    sizes.sort_unstable();
    let mut denom: u128 = 1;
    let mut i = 0;
    while i < sizes.len() {
        let s = sizes[i];
        let r = sizes[i..].iter().take_while(|&&x| x == s).count() as u32;
        denom *= factorial(s).pow(r) * factorial(r);
        i += r as usize;
    }
    u64::try_from(factorial(total) / denom).expect("fits in u64")
}

/// All partitions of `l` (parts in nonincreasing order), largest first part first.
pub fn partitions(l: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            rec(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(l, l, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coefficient_examples() {
        assert_eq!(bell_coefficient(&[2, 2, 1]), 15);
        assert_eq!(bell_coefficient(&[1, 1, 1, 1]), 1);
        assert_eq!(bell_coefficient(&[3, 1]), 4);
        assert_eq!(bell_coefficient(&[20]), 1);
        assert_eq!(bell_coefficient(&[1; 20]), 1);
    }

    #[test]
    fn third_polynomial() {
        let l = [0.3, -1.7, 2.2];
        let y = complete_bell(&l);
        let expect = l[2] + 3.0 * l[1] * l[0] + l[0].powi(3);
        assert!((y[3] - expect).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn recurrence_matches_partition_expansion(
            ls in proptest::collection::vec(-2.0f64..2.0, 8)
        ) {
            let y = complete_bell(&ls);
            for l in 1..=8u32 {
                let mut sum = 0.0;
                for p in partitions(l) {
                    let mono: f64 = p.iter().map(|&s| ls[s as usize - 1]).product();
                    sum += bell_coefficient(&p) as f64 * mono;
                }
                prop_assert!((sum - y[l as usize]).abs() <= 1e-10 * (1.0 + sum.abs()));
            }
        }
    }
}
