/// Riemann zeta for real `s > 1`, by Euler–Maclaurin summation with a
/// 20-term head and six Bernoulli corrections (absolute error below 1e-14
/// for `s ≥ 1.05`).
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta(s) needs s > 1");
    const N: u32 = 20;
    // B_2j / (2j)!
    const B: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let n = f64::from(N);
    let head: f64 = (1..N).map(|k| f64::from(k).powf(-s)).sum();
    let mut total = head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) times N^(-s-2j+1)
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        total += b * rising * power;
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        power /= n * n;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemma::ZETA3;

    #[test]
    fn known_values() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((zeta(2.0) - pi2 / 6.0).abs() < 1e-14);
        assert!((zeta(3.0) - ZETA3).abs() < 1e-14);
        assert!((zeta(4.0) - pi2 * pi2 / 90.0).abs() < 1e-14);
        assert!((zeta(1.5) - 2.612_375_348_685_488).abs() < 1e-13);
    }

    #[test]
    fn decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let z = zeta(1.0 + f64::from(i) * 0.05);
            assert!(z < prev);
            prev = z;
        }
    }
}
