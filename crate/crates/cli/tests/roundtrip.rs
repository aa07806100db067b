use liefield_cli::parse_field;
use liefield_core::coeffring::{int, rat};
use liefield_core::{ExpMonomial, ExpPoly, GaussianRational as Gq, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(rng: &mut ChaCha8Rng, n: usize) -> VectorField {
    let coeffs = (0..n)
        .map(|_| {
            let terms: Vec<_> = (0..rng.random_range(0..=3))
                .map(|_| {
                    let pow = (0..n).map(|_| rng.random_range(0..=3)).collect();
                    let freq = (0..n).map(|_| rat(rng.random_range(-5..=5), rng.random_range(1..=5))).collect();
                    let im = if rng.random_bool(0.3) { rat(rng.random_range(-5..=5), rng.random_range(1..=5)) } else { int(0) };
                    (ExpMonomial::new(pow, freq), Gq::new(rat(rng.random_range(-5..=5), rng.random_range(1..=5)), im))
                })
                .collect();
            ExpPoly::from_terms(n, terms)
        })
        .collect();
    VectorField::new(coeffs).unwrap()
}

#[test]
fn print_then_parse_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let f = random_field(&mut rng, n);
        let text = f.to_string();
        let back = parse_field(&text, n).unwrap_or_else(|e| panic!("{}: {}", text, e));
        assert_eq!(back, f, "{}", text);
        assert_eq!(back.to_string(), text);
    }
}
