//! One randomized case per call for each structural property, keyed by a seed.
//! Each returns `Err` with a description of the first violated identity.

use frobgen_core::diffop::{commutes_with_pn, witness_generators, DiffOp};
use frobgen_core::frobdecomp::{decompose, ideal_i, ideal_j, reconstruct};
use frobgen_core::groebner::{buchberger, ideal_equal, is_subideal, membership};
use frobgen_core::ideal::Ideal;
use frobgen_core::ideal_chain::{chain_ideal, stabilization, Limits};
use frobgen_core::poly::{MonomialOrder, Polynomial, Ring};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{
    apply_op, combine, membership_oracle, random_index, random_nonconstant, random_poly, Naive,
    Pascal,
};

pub type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn e(err: frobgen_core::Error) -> String {
    err.to_string()
}

/// p ∈ {2, 3, 5}, d ∈ {1, 2, 3}.
pub fn setup(seed: u64) -> (StdRng, Ring) {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let d = rng.gen_range(1..=3);
    (rng, Ring::new(p, d).expect("small prime"))
}

fn random_op(rng: &mut StdRng, ring: &Ring, n: u32) -> DiffOp {
    let below = ring.prime_power(n).expect("small power") as u32;
    let d = ring.nvars();
    let terms: Vec<_> = (0..rng.gen_range(1..4))
        .map(|_| {
            (
                random_index(rng, d, 3),
                random_index(rng, d, below),
                rng.gen_range(1..ring.p()),
            )
        })
        .collect();
    DiffOp::from_terms(ring, terms)
}

fn op_terms(q: &DiffOp) -> Vec<(Vec<u32>, Vec<u32>, u64)> {
    q.terms()
        .map(|(a, b, c)| (a.to_vec(), b.to_vec(), c as u64))
        .collect()
}

/// Keeps `f^{p^2}` small enough for a loop of a hundred cases.
fn chain_degree(ring: &Ring) -> u32 {
    if ring.p() == 5 {
        2
    } else {
        4
    }
}

/// Level-n operators commute with multiplication by p^n-th powers.
pub fn commutation(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let n = rng.gen_range(1..=2);
    let q = random_op(&mut rng, &ring, n);
    ensure!(q.level() <= n, "level {} > {n}", q.level());
    let h = random_poly(&mut rng, &ring, 2, 3).frobenius(n).map_err(e)?;
    let g = random_poly(&mut rng, &ring, 4, 5);
    let lhs = q.apply(&(&h * &g)).map_err(e)?;
    let rhs = &h * &q.apply(&g).map_err(e)?;
    ensure!(lhs == rhs, "Q(h·g) = {lhs} but h·Q(g) = {rhs} for Q = {q}, h = {h}, g = {g}");
    ensure!(commutes_with_pn(&q, &h, n, 3).map_err(e)?, "probe battery fails for {q}, {h}");
    Ok(())
}

/// `J_n(gh) ⊆ J_n(g)`.
pub fn product_inclusion(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let n = rng.gen_range(1..=2);
    let g = random_nonconstant(&mut rng, &ring, 4, 4);
    let h = random_nonconstant(&mut rng, &ring, 4, 3);
    let big = buchberger(&ideal_j(&g, n).map_err(e)?, ring.order()).map_err(e)?;
    let small = ideal_j(&(&g * &h), n).map_err(e)?;
    ensure!(is_subideal(&small, &big).map_err(e)?, "J_{n}(gh) ⊄ J_{n}(g) for g = {g}, h = {h}");
    Ok(())
}

/// `J_n(g^p) = J_{n−1}(g)^{[p]}`, and the decompositions match key by key.
pub fn power_equality(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let n = rng.gen_range(2..=3);
    let g = random_nonconstant(&mut rng, &ring, 4, 4);
    let gp = g.pow(ring.p() as u64);
    let lhs = ideal_j(&gp, n).map_err(e)?;
    let rhs = ideal_j(&g, n - 1).map_err(e)?.frobenius_power(1).map_err(e)?;
    ensure!(ideal_equal(&lhs, &rhs, ring.order()).map_err(e)?, "ideals differ for g = {g}, n = {n}");
    let fine = decompose(&gp, n).map_err(e)?;
    let coarse = decompose(&g, n - 1).map_err(e)?;
    ensure!(fine.parts().len() == coarse.parts().len(), "part counts differ for g = {g}");
    for ((a, r), (b, s)) in fine.parts().iter().zip(coarse.parts()) {
        ensure!(Some(a.clone()) == b.checked_scale(ring.p() as u64), "key {a} vs {b}");
        ensure!(r == s, "root {r} vs {s}");
    }
    Ok(())
}

/// Every generator of `J_n(f)` is `Q_α(f)` for the constructed `Q_α ∈ D^{(n)}`,
/// checked with the reference action.
pub fn witnesses_hit_generators(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let n = if ring.p() == 5 { 1 } else { rng.gen_range(1..=2) };
    let f = random_nonconstant(&mut rng, &ring, 4, 5);
    let ws = witness_generators(&f, n).map_err(e)?;
    let dec = decompose(&f, n).map_err(e)?;
    let mut pascal = Pascal::new(ring.p() as u64);
    let q = ring.prime_power(n).map_err(e)? as u32;
    ensure!(ws.len() == dec.parts().len(), "missing witnesses for {f}");
    for (alpha, root) in dec.parts() {
        let op = &ws[alpha];
        ensure!(op.level() <= n, "Q_{alpha} has level {}", op.level());
        let image = apply_op(&op_terms(op), &Naive::from_poly(&f), &mut pascal);
        ensure!(image == Naive::from_poly(root).inflate(q), "Q_{alpha}(f) is not the piece for f = {f}");
    }
    Ok(())
}

/// `D_β(f) ∈ J_n(f)` for `β < p^n`.
pub fn derivatives_in_j(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let n = if ring.p() == 5 { 1 } else { rng.gen_range(1..=2) };
    let q = ring.prime_power(n).map_err(e)? as u32;
    let f = random_nonconstant(&mut rng, &ring, 4, 5);
    let basis = buchberger(&ideal_j(&f, n).map_err(e)?, ring.order()).map_err(e)?;
    for _ in 0..4 {
        let beta = random_index(&mut rng, ring.nvars(), q.min(5));
        let image = DiffOp::derivation(&ring, beta.clone()).apply(&f).map_err(e)?;
        ensure!(basis.contains(&image).map_err(e)?, "D_{beta}(f) ∉ J_{n}(f) for f = {f}");
    }
    Ok(())
}

/// `I_2(f^{p^2−1}) ⊆ I_1(f^{p−1})`.
pub fn chain_descent(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let f = random_nonconstant(&mut rng, &ring, chain_degree(&ring), 4);
    let lim = Limits::default();
    let i1 = chain_ideal(&f, 1, &lim).map_err(e)?;
    let i2 = chain_ideal(&f, 2, &lim).map_err(e)?;
    let b1 = buchberger(&i1, ring.order()).map_err(e)?;
    ensure!(is_subideal(&i2, &b1).map_err(e)?, "chain ascends for f = {f}");
    Ok(())
}

/// Chain generators have degree `< deg f`, `dim(I_n ∩ W_e)` never grows, and
/// the last two levels agree.
pub fn chain_mechanism(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let f = random_nonconstant(&mut rng, &ring, chain_degree(&ring), 4);
    let res = stabilization(&f, &Limits::default()).map_err(e)?;
    ensure!(res.s >= 2, "s = {}", res.s);
    let deg = f.degree();
    let mut prev = usize::MAX;
    for level in &res.levels {
        ensure!(
            level.ideal.generators().iter().all(|g| g.degree() < deg),
            "level {} has a generator of degree ≥ {deg} for f = {f}",
            level.n
        );
        ensure!(level.we_dim <= prev, "we_dim grows at level {} for f = {f}", level.n);
        prev = level.we_dim;
    }
    let k = res.levels.len();
    ensure!(
        res.levels[k - 1].basis.basis() == res.levels[k - 2].basis.basis(),
        "last two levels differ for f = {f}"
    );
    Ok(())
}

pub fn decomposition_round_trip(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let n = rng.gen_range(1..=3);
    let f = random_poly(&mut rng, &ring, 12, 8);
    let dec = decompose(&f, n).map_err(e)?;
    ensure!(reconstruct(&dec).map_err(e)? == f, "round trip fails for {f}");
    let q = ring.prime_power(n).map_err(e)? as u32;
    ensure!(
        dec.parts().iter().all(|(a, _)| a.iter().all(|&x| x < q)),
        "key out of range for {f}"
    );
    if !f.is_zero() {
        ensure!(ideal_i(&f, n).map_err(e)?.len() == dec.parts().len(), "I_n size for {f}");
    }
    Ok(())
}

/// `(g+h)^{[q]} = g^{[q]} + h^{[q]}`, and the Frobenius equals the repeated product.
pub fn freshmans_dream(seed: u64) -> Outcome {
    let (mut rng, ring) = setup(seed);
    let n = rng.gen_range(0..=2);
    let g = random_poly(&mut rng, &ring, 4, 4);
    let h = random_poly(&mut rng, &ring, 4, 4);
    let lhs = (&g + &h).frobenius(n).map_err(e)?;
    let rhs = &g.frobenius(n).map_err(e)? + &h.frobenius(n).map_err(e)?;
    ensure!(lhs == rhs, "additivity fails for {g}, {h}");
    let q = ring.prime_power(n).map_err(e)?;
    ensure!(
        Naive::from_poly(&lhs) == Naive::from_poly(&(&g + &h)).pow(q),
        "Frobenius differs from the repeated product"
    );
    Ok(())
}

#[derive(Debug, Default, Clone, Copy)]
pub struct MembershipTally {
    pub members: usize,
    pub non_members: usize,
}

fn membership_target(
    ideal: &Ideal,
    f: &Polynomial,
    order: MonomialOrder,
    tally: &mut MembershipTally,
) -> Outcome {
    let gens: Vec<Naive> = ideal.generators().iter().map(Naive::from_poly).collect();
    let target = Naive::from_poly(f);
    match membership(f, ideal, order).map_err(e)? {
        Some(cof) => {
            let cof: Vec<Naive> = cof.iter().map(Naive::from_poly).collect();
            ensure!(combine(&cof, &gens) == target, "cofactors of {f} in {ideal} do not re-expand");
            let bound = cof
                .iter()
                .zip(&gens)
                .filter(|(h, _)| !h.is_zero())
                .map(|(h, g)| h.degree() + g.degree())
                .max()
                .unwrap_or(0)
                .max(target.degree());
            let oracle = membership_oracle(&target, &gens, bound)
                .ok_or_else(|| format!("oracle rejects {f} in {ideal} at degree {bound}"))?;
            ensure!(combine(&oracle, &gens) == target, "oracle cofactors do not re-expand");
            tally.members += 1;
        }
        None => {
            let bound = target.degree().max(0) + 4;
            ensure!(
                membership_oracle(&target, &gens, bound).is_none(),
                "oracle finds {f} in {ideal} although the basis rejects it"
            );
            tally.non_members += 1;
        }
    }
    Ok(())
}

/// One random ideal with a known member, random targets and `1`, each
/// decided by Buchberger and by the linear-algebra oracle.
pub fn groebner_against_oracle(seed: u64, tally: &mut MembershipTally) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let d = rng.gen_range(1..=3);
    let order = if rng.gen_bool(0.5) {
        MonomialOrder::Grevlex
    } else {
        MonomialOrder::Lex
    };
    let ring = Ring::with_order(p, d, order).map_err(e)?;
    let gens: Vec<Polynomial> = (0..rng.gen_range(1..=3))
        .map(|_| random_nonconstant(&mut rng, &ring, 3, 3))
        .collect();
    let ideal = Ideal::new(&ring, gens).map_err(e)?;

    let mut member = ring.zero();
    for g in ideal.generators() {
        member = &member + &(&random_poly(&mut rng, &ring, 2, 3) * g);
    }
    membership_target(&ideal, &member, order, tally)?;
    for _ in 0..3 {
        let f = random_poly(&mut rng, &ring, 3, 4);
        membership_target(&ideal, &f, order, tally)?;
    }
    membership_target(&ideal, &ring.one(), order, tally)?;

    let gb = buchberger(&ideal, order).map_err(e)?;
    let naive: Vec<Naive> = ideal.generators().iter().map(Naive::from_poly).collect();
    for (b, row) in gb.basis().iter().zip(gb.transform()) {
        let row: Vec<Naive> = row.iter().map(Naive::from_poly).collect();
        ensure!(combine(&row, &naive) == Naive::from_poly(b), "transform row for {b} is wrong");
    }
    Ok(())
}

pub type Suite = (&'static str, fn(u64) -> Outcome);

pub const PROPERTY_SUITES: [Suite; 9] = [
    ("commutation with p^n-th powers", commutation),
    ("J_n(gh) in J_n(g)", product_inclusion),
    ("J_n(g^p) = J_(n-1)(g)^[p]", power_equality),
    ("witness operators reach J_n(f)", witnesses_hit_generators),
    ("D_beta(f) in J_n(f)", derivatives_in_j),
    ("chain descent", chain_descent),
    ("chain degree bound and W_e monotonicity", chain_mechanism),
    ("decomposition round trip", decomposition_round_trip),
    ("freshman's dream", freshmans_dream),
];
