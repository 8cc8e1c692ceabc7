//! Small finite semirings used as fixtures.

use num_integer::Integer;

use super::FiniteSemiring;

/// The one-element semiring, where `0 = 1`.
pub fn zero_semiring() -> FiniteSemiring {
    FiniteSemiring::new(vec!["0".into()], vec![vec![0]], vec![vec![0]], 0, 0).expect("1x1 tables")
}

/// The chain `c0 < c1 < … < c(k-1)` with max as addition and min as multiplication.
pub fn chain(k: usize) -> FiniteSemiring {
    assert!(k >= 1, "a chain needs at least one element");
    let labels = (0..k).map(|i| format!("c{i}")).collect();
    FiniteSemiring::from_fns(labels, |a, b| a.max(b), |a, b| a.min(b), 0, k - 1).expect("chain")
}

/// `(ℕ, +, ×)` saturated at `k - 1`; a semiring that is not idempotent.
pub fn truncated_naturals(k: usize) -> FiniteSemiring {
    assert!(k >= 2);
    let labels = (0..k).map(|i| i.to_string()).collect();
    FiniteSemiring::from_fns(
        labels,
        |a, b| (a + b).min(k - 1),
        |a, b| (a * b).min(k - 1),
        0,
        1,
    )
    .expect("truncated naturals")
}

/// Min-plus values `{0, 1, …, k-1, ∞}` with saturating addition as the product.
///
/// Element `k` is `∞`, the additive identity; `0` is the multiplicative one.
pub fn tropical_fragment(k: usize) -> FiniteSemiring {
    assert!(k >= 1);
    let labels = (0..k)
        .map(|i| i.to_string())
        .chain(std::iter::once("inf".to_string()))
        .collect();
    FiniteSemiring::from_fns(
        labels,
        |a, b| a.min(b),
        |a, b| if a == k || b == k { k } else { (a + b).min(k - 1) },
        k,
        0,
    )
    .expect("tropical fragment")
}

/// The ring `ℤ/n` viewed as a semiring.
pub fn integers_mod(n: usize) -> FiniteSemiring {
    assert!(n >= 1);
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteSemiring::from_fns(labels, |a, b| (a + b) % n, |a, b| (a * b) % n, 0, 1 % n)
        .expect("Z/n")
}

/// Ideals of `ℤ/n`, labelled by the divisor `d` of `n` generating them.
///
/// Addition is gcd and multiplication is `gcd(d·e, n)`; the label `n` is the zero ideal.
pub fn divisor_ideals(n: usize) -> FiniteSemiring {
    assert!(n >= 1);
    let divs: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let pos = |d: usize| divs.iter().position(|&x| x == d).expect("divisor");
    let labels = divs.iter().map(|d| format!("<{d}>")).collect();
    FiniteSemiring::from_fns(
        labels,
        |a, b| pos(divs[a].gcd(&divs[b])),
        |a, b| pos((divs[a] * divs[b]).gcd(&n)),
        pos(n),
        pos(1),
    )
    .expect("divisor ideals")
}

/// The product semiring with componentwise operations.
pub fn product(left: &FiniteSemiring, right: &FiniteSemiring) -> FiniteSemiring {
    let m = right.size();
    let labels = left
        .elements()
        .flat_map(|a| right.elements().map(move |b| (a, b)))
        .map(|(a, b)| format!("({},{})", left.label(a), right.label(b)))
        .collect();
    let split = |x: usize| (x / m, x % m);
    FiniteSemiring::from_fns(
        labels,
        |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            left.plus(a, c) * m + right.plus(b, d)
        },
        |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            left.times(a, c) * m + right.times(b, d)
        },
        left.zero_index() * m + right.zero_index(),
        left.one_index() * m + right.one_index(),
    )
    .expect("product")
}

/// A named corpus of valid finite semirings with at most six elements.
pub fn corpus() -> Vec<(String, FiniteSemiring)> {
    let b = chain(2);
    let mut out = vec![
        ("boolean".to_string(), super::Boolean::as_finite()),
        ("zero".to_string(), zero_semiring()),
    ];
    for k in 3..=6 {
        out.push((format!("chain{k}"), chain(k)));
    }
    out.push(("boolean_square".into(), product(&b, &b)));
    out.push(("boolean_times_chain3".into(), product(&b, &chain(3))));
    for n in [4, 6, 8, 12] {
        out.push((format!("ideals_of_z{n}"), divisor_ideals(n)));
    }
    out.push(("tropical3".into(), tropical_fragment(3)));
    out.push(("truncated_naturals4".into(), truncated_naturals(4)));
    out.push(("z6".into(), integers_mod(6)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_small() {
        let c = corpus();
        assert!(c.len() >= 12);
        for (name, s) in &c {
            assert!(s.check_semiring_axioms().is_ok(), "{name}");
            assert!(s.size() <= 6, "{name}");
        }
    }

    #[test]
    fn expected_shapes() {
        assert_eq!(divisor_ideals(12).size(), 6);
        assert!(divisor_ideals(12).is_lo_semiring().holds());
        assert!(!product(&chain(2), &chain(2)).is_lo_semiring().missing_meet.is_some());
        assert!(tropical_fragment(3).is_simple());
        assert!(!integers_mod(6).is_idempotent());
    }
}
