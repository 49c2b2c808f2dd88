//! Named verification suites. Each returns a [`SuiteReport`] whose checks
//! compare string-serialized exact values.

use std::fmt::Display;
use std::time::Instant;

use num_traits::Zero;

use crate::bb::{self, BbSpace, H2Class, RANK};
use crate::blowup::{self, BlowupCenter, Convention, FourfoldH4};
use crate::cubic;
use crate::deform::{self, FixInstance, FixPair};
use crate::error::{Error, Result};
use crate::h4::{self, fujiki_pair, fujiki_with_product, sym2_embed, H4Model};
use crate::hodge::{self, PicardData};
use crate::linalg::{rat, FiniteAbelianGroup, Lattice, Mat};
use crate::report::{Check, SuiteReport};
use crate::sample::{self, SampleRng};

pub const SUITES: [&str; 7] = [
    "h4-torsion",
    "t4-structure",
    "even-odd",
    "minimal-class",
    "cubic",
    "deformation",
    "blowup",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the number of random samples in every sampled check.
    pub trials: Option<usize>,
    pub convention: Convention,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            trials: None,
            convention: Convention::Quadratic,
        }
    }
}

impl SuiteConfig {
    fn count(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> SampleRng {
        sample::rng(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Run a suite by name; `all` concatenates every suite with prefixed check names.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = if name == "all" {
        let mut all = Vec::new();
        for s in SUITES {
            for mut c in checks_for(s, cfg)? {
                c.name = format!("{s}/{}", c.name);
                all.push(c);
            }
        }
        all
    } else {
        checks_for(name, cfg)?
    };
    Ok(SuiteReport::new(
        name,
        cfg.seed,
        checks,
        start.elapsed().as_millis() as u64,
    ))
}

fn checks_for(name: &str, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    match name {
        "h4-torsion" => Ok(h4_torsion(cfg)),
        "t4-structure" => Ok(t4_structure()),
        "even-odd" => Ok(even_odd(cfg)),
        "minimal-class" => Ok(minimal_class(cfg)),
        "cubic" => Ok(cubic_suite(cfg)),
        "deformation" => Ok(deformation(cfg)),
        "blowup" => Ok(blowup_suite(cfg)),
        _ => Err(Error::Parse(format!(
            "unknown suite {name:?}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

fn check<T: Display>(name: &str, expected: impl Display, actual: Result<T>, anchor: &str) -> Check {
    match actual {
        Ok(a) => Check::new(name, expected, a, anchor),
        Err(e) => Check::error(name, expected, e, anchor),
    }
}

/// Count how many of `n` trials succeed; an error counts as a failure and is reported.
fn tally(name: &str, n: usize, anchor: &str, mut trial: impl FnMut(usize) -> Result<bool>) -> Check {
    let mut ok = 0;
    let mut first_err = None;
    for i in 0..n {
        match trial(i) {
            Ok(true) => ok += 1,
            Ok(false) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Check::error(name, format!("{n}/{n}"), format!("{ok}/{n}, {e}"), anchor),
        None => Check::new(name, format!("{n}/{n}"), format!("{ok}/{n}"), anchor),
    }
}

/// `Z/2^22 + Z/10` style rendering; repeated factors are grouped.
pub fn group_string(g: &FiniteAbelianGroup) -> String {
    let f = g.invariant_factors();
    if f.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < f.len() {
        let j = (i..f.len()).find(|&j| f[j] != f[i]).unwrap_or(f.len());
        if j - i == 1 {
            parts.push(format!("Z/{}", f[i]));
        } else {
            parts.push(format!("(Z/{})^{}", f[i], j - i));
        }
        i = j;
    }
    parts.join(" + ")
}

fn mat_string(m: &Mat) -> String {
    serde_json::to_string(m).expect("matrix serializes")
}

fn h4_torsion(cfg: &SuiteConfig) -> Vec<Check> {
    const ANCHOR_T: &str = "torsion of H4 modulo Sym2";
    const ANCHOR_I: &str = "integral classes";
    let m = H4Model::get();
    let mut out = vec![
        check(
            "index_Sym2_in_L",
            "41943040",
            m.sym2().index_in(m.l().lattice()),
            ANCHOR_T,
        ),
        Check::new(
            "t4_invariant_factors",
            "(Z/2)^22 + Z/10",
            group_string(m.quotient().group()),
            ANCHOR_T,
        ),
        check(
            "det_M_rho_tilde",
            "175921860444160",
            h4::build_m_rho_tilde().and_then(|x| x.determinant()),
            "determinant of M_rho",
        ),
        check("det_gram_L", "1", m.l().gram_determinant(), "unimodularity"),
    ];
    match h4::explicit_basis_check(m.l()) {
        Ok(r) => {
            out.push(Check::new("explicit_basis_identities", 298, r.identities_checked, "explicit basis"));
            out.push(Check::new("explicit_basis_spans_L", true, r.spans_l, "explicit basis"));
            out.push(Check::new(
                "explicit_basis_delta_sq_v0_coefficient",
                "-1",
                r.delta_sq_v0_coefficient,
                "explicit basis",
            ));
        }
        Err(e) => out.push(Check::error("explicit_basis_identities", 298, e, "explicit basis")),
    }

    let q = m.q();
    let tq = m.two_fifths_q();
    let mut rng = cfg.rng(1);
    out.push(tally("fujiki_q_times_product_is_25b", cfg.count(100), "Fujiki relation", |_| {
        let a = sample::random_class(&mut rng, 3);
        let b = sample::random_class(&mut rng, 3);
        Ok(fujiki_with_product(&q, &a, &b) == rat(25 * bb::bb_form(&a, &b)))
    }));
    out.push(Check::new("two_fifths_q_square", 92, fujiki_pair(&tq, &tq), ANCHOR_I));
    out.push(Check::new("two_fifths_q_in_L", true, m.l().contains(&tq), ANCHOR_I));
    out.push(Check::new("v0_in_L", true, m.l().contains(m.v0()), ANCHOR_I));
    out.push(tally("gram_lambda_sq_two_fifths_q", cfg.count(10), ANCHOR_I, |i| {
        let l = if i % 2 == 0 {
            sample::random_odd_polarization(&mut rng)
        } else {
            sample::random_even_polarization(&mut rng, None)
        };
        let b0 = l.square();
        let l2 = sym2_embed(&l, &l);
        let g = [
            fujiki_pair(&l2, &l2),
            fujiki_pair(&l2, &tq),
            fujiki_pair(&tq, &tq),
        ];
        let det = &g[0] * &g[2] - &g[1] * &g[1];
        Ok(g == [rat(3 * b0 * b0), rat(10 * b0), rat(92)] && det == rat(176 * b0 * b0))
    }));

    let mut rng = cfg.rng(2);
    out.push(tally("L_independent_of_delta", cfg.count(5), "change of delta", |_| {
        let d = sample::random_exceptional(&mut rng);
        Ok(&h4::build_l(&d)? == m.l())
    }));

    let triples: Vec<_> = {
        let mut rng = cfg.rng(3);
        (0..cfg.count(50))
            .map(|_| {
                (
                    sample::random_class(&mut rng, 3),
                    sample::random_exceptional(&mut rng),
                    sample::random_exceptional(&mut rng),
                )
            })
            .collect()
    };
    let n = triples.len();
    out.push(tally("delta_difference_half_in_Lambda", n, "change of delta", |i| {
        let (_, d, e) = &triples[i];
        Ok((d.class() - e.class()).coords().iter().all(|x| x % 2 == 0))
    }));
    out.push(tally("delta_sq_difference_eighth_in_L", n, "change of delta", |i| {
        let (_, d, e) = &triples[i];
        let diff = &sym2_embed(d.class(), d.class()) - &sym2_embed(e.class(), e.class());
        Ok(m.l().contains(&diff.scaled_frac(1, 8)))
    }));
    out.push(tally("alpha_alpha_minus_delta_half_in_L", n, "v_delta", |i| {
        let (a, d, _) = &triples[i];
        let t = sym2_embed(a, &(a - d.class()));
        Ok(m.l().contains(&t.scaled_frac(1, 2)))
    }));
    out
}

fn t4_structure() -> Vec<Check> {
    const ANCHOR: &str = "structure of T4";
    let m = H4Model::get();
    let t4 = match h4::torsion_t4(m.l()) {
        Ok(t) => t,
        Err(e) => return vec![Check::error("t4_order", "41943040", e, ANCHOR)],
    };
    let g = t4.group();
    let d0 = BbSpace::get().delta0();
    let mut out = vec![
        Check::new("t4_order", "41943040", t4.order(), ANCHOR),
        check("order_v0bar", 10, g.element_order(t4.v0bar()), "v_0"),
        check("order_w0bar", 5, g.element_order(t4.w0bar()), "v_0"),
        check("psi_kernel_order", 5, t4.psi_kernel_order(), ANCHOR),
        check("psi_image_rank", 23, t4.psi_image_rank(), ANCHOR),
        check(
            "phi_image",
            "Z/5",
            t4.phi_image().map(|h| group_string(&h)),
            ANCHOR,
        ),
        check(
            "psi_w0bar_zero",
            true,
            t4.psi(t4.w0bar()).map(|v| v.iter().all(|&b| b == 0)),
            ANCHOR,
        ),
    ];
    // ker v̄ on Λ/2Λ, written as supports of an F_2 basis
    let ker = t4.vbar_kernel_mod2().map(|k| {
        let supports: Vec<Vec<usize>> = k
            .iter()
            .map(|v| (0..v.len()).filter(|&i| v[i] == 1).collect())
            .collect();
        format!("{supports:?}")
    });
    out.push(check("ker_vbar_mod2", format!("{:?}", vec![vec![bb::DELTA0]]), ker, "v_delta"));
    out.push(tally("psi_vbar_is_b_mod2", RANK, "v_delta", |i| {
        let x = H2Class::basis(i);
        let got = t4.psi(t4.vbar_basis(i))?;
        let want: Vec<u8> = (0..RANK)
            .map(|k| bb::bb_form(&x, &H2Class::basis(k)).rem_euclid(2) as u8)
            .collect();
        let from_lift = t4.psi_of_lift(&h4::build_v_delta(&d0, &x), &d0)?;
        Ok(got == want && from_lift == want)
    }));
    out
}

fn even_odd(cfg: &SuiteConfig) -> Vec<Check> {
    const ANCHOR_V: &str = "integral classes";
    let mut out = Vec::new();
    let mut rng = cfg.rng(4);
    let n = cfg.count(200);
    let mut parities = [false, false];
    out.push(tally("even_class_conditions_agree", n, "even classes", |i| {
        let l = if i % 2 == 0 {
            sample::random_primitive(&mut rng)
        } else {
            sample::random_even_polarization(&mut rng, None)
        };
        let d = sample::random_exceptional(&mut rng);
        let c = hodge::even_conditions(&l, &d)?;
        parities[c.is_even as usize] = true;
        Ok(c.agree())
    }));
    if n >= 2 {
        out.push(Check::new("even_class_both_parities_sampled", "[true, true]", format!("{parities:?}"), "even classes"));
    }

    let v_matches = |l: &H2Class| -> Result<bool> {
        let v = hodge::v_lambda0(l)?;
        let e = hodge::v_lambda0_expected_basis(l)?;
        let exp = Lattice::new(&[e[0].coords().to_vec(), e[1].coords().to_vec()], v.form().clone())?;
        Ok(v == exp)
    };
    let mut rng = cfg.rng(5);
    let odd: Vec<H2Class> = (0..cfg.count(20)).map(|_| sample::random_odd_polarization(&mut rng)).collect();
    let even: Vec<H2Class> = (0..cfg.count(20))
        .map(|_| sample::random_even_polarization(&mut rng, None))
        .collect();
    out.push(tally("v_lambda_odd_basis", odd.len(), ANCHOR_V, |i| v_matches(&odd[i])));
    out.push(tally("v_lambda_even_basis", even.len(), ANCHOR_V, |i| v_matches(&even[i])));

    let k = cfg.count(5).min(odd.len()).min(even.len());
    let img = |l: &H2Class| hodge::hodge_image_in_t4(l).map(|g| group_string(&g));
    let z4 = |l: &H2Class| hodge::z4_quotient_bound(l).map(|g| group_string(&g));
    out.push(tally("hodge_image_order_odd", k, "Hodge classes in T4", |i| Ok(img(&odd[i])? == "Z/5")));
    out.push(tally("hodge_image_order_even", k, "Hodge classes in T4", |i| Ok(img(&even[i])? == "Z/10")));
    out.push(tally("z4_quotient_odd", k, "Hodge classes modulo c2", |i| Ok(z4(&odd[i])? == "Z/3")));
    out.push(tally("z4_quotient_even", k, "Hodge classes modulo c2", |i| Ok(z4(&even[i])? == "Z/24")));
    let std_odd = &H2Class::e(1) + &H2Class::f(1);
    let std_even = cubic::standard_g1();
    out.push(check("hodge_image_standard_odd", "Z/5", img(&std_odd), "Hodge classes in T4"));
    out.push(check("hodge_image_standard_even", "Z/10", img(&std_even), "Hodge classes in T4"));
    out.push(check("z4_quotient_standard_odd", "Z/3", z4(&std_odd), "Hodge classes modulo c2"));
    out.push(check("z4_quotient_standard_even", "Z/24", z4(&std_even), "Hodge classes modulo c2"));
    out
}

fn minimal_class(cfg: &SuiteConfig) -> Vec<Check> {
    const ANCHOR: &str = "index 2 for Picard rank one";
    let mut out = Vec::new();
    let mut rng = cfg.rng(6);
    out.push(tally("rank_one_infeasible_image_in_2Z", cfg.count(20), ANCHOR, |i| {
        let l = sample::random_assumption_polarization(&mut rng, i)?;
        let r = hodge::minimal_class_search(&PicardData::rank_one(l)?)?;
        Ok(!r.feasible && r.image_in_even())
    }));
    let l_even = cubic::standard_g1();
    let pos = PicardData::new(&[H2Class::delta0()], l_even).and_then(|p| {
        let r = hodge::minimal_class_search(&p)?;
        let t = hodge::transcendental_basis(&p)?;
        let m = H4Model::get();
        let w = match &r.witness {
            Some(w) => hodge::minimality_functional(w, &t)?.to_string(),
            None => "none".into(),
        };
        let v0_m = hodge::minimality_functional(m.v0(), &t)?;
        let v0_in = r.search_lattice.contains(m.v0().coords());
        Ok((r.feasible, w, v0_in && v0_m == rat(1)))
    });
    match pos {
        Ok((feasible, w, v0)) => {
            out.push(Check::new("positive_control_feasible", true, feasible, "minimal class"));
            out.push(Check::new("positive_control_witness_m", 1, w, "minimal class"));
            out.push(Check::new("positive_control_v0_has_m_1", true, v0, "minimal class"));
        }
        Err(e) => out.push(Check::error("positive_control_feasible", true, e, "minimal class")),
    }
    out
}

fn cubic_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const ANCHOR: &str = "integral Hodge classes of the Fano variety";
    const ANCHOR_P: &str = "Pfaffian polarization";
    let mut out = Vec::new();
    match cubic::build_cubic_model(cubic::standard_g1()) {
        Ok(m) => {
            let l = H4Model::get().l();
            out.push(Check::new("g1_fourth", 108, m.g1_fourth(), ANCHOR));
            out.push(Check::new("g2_g1_sq", 45, m.g2_g1_sq(), ANCHOR));
            out.push(Check::new("g2_in_L", true, l.contains(m.g2()), ANCHOR));
            out.push(check(
                "lines_class_divisibility_in_L",
                1,
                l.divisibility(&m.lines_class()),
                ANCHOR,
            ));
            out.push(check(
                "lines_hodge_basis_is_V_g1",
                true,
                cubic::lines_hodge_basis(&m).map(|_| true),
                ANCHOR,
            ));
            let eighth = (&h4::two_fifths_q() + &m.g1_sq()).scaled_frac(1, 8);
            out.push(Check::new("lines_class_is_eighth_of_even_generator", true, eighth == m.lines_class(), ANCHOR));
            let t = cubic::transcendental_of(&m).unwrap_or_default();
            let mut rng = cfg.rng(7);
            out.push(tally("g2_vanishes_on_transcendental_pairs", cfg.count(20), ANCHOR, |_| {
                if t.is_empty() {
                    return Err(Error::Degenerate("empty transcendental basis".into()));
                }
                let mut pick = || {
                    let mut a = H2Class::zero();
                    for _ in 0..3 {
                        let j = rand::Rng::random_range(&mut rng, 0..t.len());
                        let c = rand::Rng::random_range(&mut rng, -2..=2i64);
                        a = &a + &t[j].scaled(c);
                    }
                    a
                };
                let (a, b) = (pick(), pick());
                Ok(m.g2_against(&a, &b).is_zero())
            }));
            out.push(check(
                "g1_rank_one_search",
                "infeasible, g = 2",
                PicardData::rank_one(m.g1().clone())
                    .and_then(|p| hodge::minimal_class_search(&p))
                    .map(|r| {
                        format!(
                            "{}, g = {}",
                            if r.feasible { "feasible" } else { "infeasible" },
                            r.image_generator
                        )
                    }),
                "index 2 for Picard rank one",
            ));
        }
        Err(e) => out.push(Check::error("g1_fourth", 108, e, ANCHOR)),
    }
    let mut rng = cfg.rng(8);
    out.push(tally("cubic_model_over_embeddings", cfg.count(10), ANCHOR, |_| {
        let g = sample::random_cubic_polarization(&mut rng);
        let m = cubic::build_cubic_model(g)?;
        cubic::lines_hodge_basis(&m)?;
        Ok(true)
    }));
    match cubic::pfaffian_check() {
        Ok(r) => {
            out.push(Check::new("pfaffian_b_square", 14, r.b_square, ANCHOR_P));
            out.push(Check::new("pfaffian_b_in_delta0_perp", true, r.b_in_delta0_perp, ANCHOR_P));
            out.push(Check::new("pfaffian_lambda0_square", 6, r.lambda0_square, ANCHOR_P));
            out.push(Check::new("pfaffian_lambda0_even", true, r.is_even, ANCHOR_P));
            out.push(Check::new("pfaffian_lambda0_primitive", true, r.is_primitive, ANCHOR_P));
            out.push(Check::new("pfaffian_assumption_holds", true, r.assumption_holds, ANCHOR_P));
        }
        Err(e) => out.push(Check::error("pfaffian_b_square", 14, e, ANCHOR_P)),
    }
    out.push(check(
        "c2_third_is_two_fifths_q_delta0",
        true,
        cubic::c2_consistency_for(&BbSpace::get().delta0()),
        "second Chern class",
    ));
    let mut rng = cfg.rng(9);
    out.push(tally("c2_third_is_two_fifths_q_random_delta", cfg.count(3), "second Chern class", |_| {
        cubic::c2_consistency_for(&sample::random_exceptional(&mut rng))
    }));
    out
}

fn deformation(cfg: &SuiteConfig) -> Vec<Check> {
    const ANCHOR: &str = "fixed part of H22";
    let mut out = Vec::new();
    let mut rng = cfg.rng(10);
    let trial = |inst: &FixInstance| -> Result<bool> {
        let sol = deform::solve_fix(inst)?;
        Ok(sol.dimension() == 2 && deform::verify_generators(&sol, inst)?)
    };
    out.push(tally("random_instances_n3_to_10", cfg.count(50), ANCHOR, |_| {
        let n = rand::Rng::random_range(&mut rng, 3..=10usize);
        trial(&FixInstance::random(&mut rng, n))
    }));
    let big = FixInstance::random(&mut rng, 21);
    out.push(check("instance_n21", true, trial(&big), ANCHOR));

    let small = FixInstance::random(&mut rng, 5);
    let neg = deform::solve_fix(&small).and_then(|sol| {
        let mut gens = deform::expected_generators(&small)?.to_vec();
        let mut c = gens[1].c.clone();
        let bumped = c.get(0, 1) + rat(1);
        c.set(0, 1, bumped.clone());
        c.set(1, 0, bumped);
        gens[1] = FixPair { c, c0: gens[1].c0.clone() };
        Ok(!deform::same_span(&sol.basis, &gens)?)
    });
    out.push(check("perturbed_generator_rejected", true, neg, ANCHOR));
    let scaled = small
        .with_s(small.s().iter().map(|x| x * rat(-3)).collect())
        .and_then(|s3| {
            let a = deform::solve_fix(&small)?;
            let b = deform::solve_fix(&s3)?;
            deform::same_span(&a.basis, &b.basis)
        });
    out.push(check("scaling_s_keeps_span", true, scaled, ANCHOR));
    out
}

fn blowup_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const ANCHOR: &str = "blow-up formulas";
    const ANCHOR_I: &str = "odd index";
    let mut out = Vec::new();
    // Y with H4 = U + <2>, transcendental part U
    let y = FourfoldH4::new(
        Mat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]),
        &[vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(1), rat(0)]],
    );
    let y = match y {
        Ok(y) => y,
        Err(e) => return vec![Check::error("point_block", "[[\"-1\"]]", e, ANCHOR)],
    };
    let block_of = |c: &BlowupCenter| -> Result<(String, FourfoldH4)> {
        let z = blowup::blowup_h4(&y, c)?;
        let n = y.rank();
        let k = z.rank() - n;
        let mut b = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                b.set(i, j, z.gram().get(n + i, n + j).clone());
            }
            for j in 0..n {
                if !z.gram().get(n + i, j).is_zero() {
                    return Err(Error::CheckFailed("new block not orthogonal".into()));
                }
            }
        }
        Ok((mat_string(&b), z))
    };
    let u = Mat::from_i64(&[&[0, 1], &[1, 0]]);
    let cases = [
        ("point", BlowupCenter::Point, Mat::from_i64(&[&[-1]])),
        ("curve_d5", BlowupCenter::Curve { d: 5 }, Mat::from_i64(&[&[5, -1], &[-1, 0]])),
        (
            "surface_U",
            BlowupCenter::Surface {
                h2_gram: u.clone(),
                transcendental_sub: vec![],
            },
            u.neg(),
        ),
    ];
    for (name, c, want) in &cases {
        let r = block_of(c);
        out.push(check(
            &format!("{name}_block"),
            mat_string(want),
            r.as_ref().map(|(s, _)| s.clone()).map_err(Clone::clone),
            ANCHOR,
        ));
        if !matches!(c, BlowupCenter::Surface { .. }) {
            out.push(check(
                &format!("{name}_transcendental_unchanged"),
                mat_string(&y.transcendental_gram()),
                r.map(|(_, z)| mat_string(&z.transcendental_gram())),
                ANCHOR,
            ));
        }
    }
    out.push(check(
        "surface_transcendental_grows",
        3,
        blowup::blowup_h4(
            &y,
            &BlowupCenter::Surface {
                h2_gram: u,
                transcendental_sub: vec![vec![1, 0]],
            },
        )
        .map(|z| z.transcendental().rank()),
        ANCHOR,
    ));

    let mut cases = 0;
    let mut odd = 0;
    for conv in [Convention::Quadratic, Convention::PaperLiteral] {
        for e0 in [1, 3, 5] {
            for e in [2, 3, 4] {
                cases += 1;
                if matches!(blowup::residue_transform(e0, e, conv), Ok(r) if r % 2 != 0) {
                    odd += 1;
                }
            }
        }
    }
    out.push(Check::new(
        "residue_transform_parity",
        format!("{cases}/{cases}"),
        format!("{odd}/{cases}"),
        ANCHOR_I,
    ));
    out.push(check(
        "residue_transform_3_3",
        "27, 9",
        (|| {
            Ok(format!(
                "{}, {}",
                blowup::residue_transform(3, 3, Convention::Quadratic)?,
                blowup::residue_transform(3, 3, Convention::PaperLiteral)?
            ))
        })(),
        ANCHOR_I,
    ));
    let red = blowup::odd_index_reduction(3, 3, cfg.convention);
    out.push(check(
        "odd_index_linear_total",
        1,
        red.as_ref().map(|r| r.linear_total).map_err(Clone::clone),
        ANCHOR_I,
    ));
    out.push(check(
        "odd_index_quadratic_total",
        match cfg.convention {
            Convention::Quadratic => 27 + 2 * 13 * 13,
            Convention::PaperLiteral => 9 + 2 * 4 * 4,
        },
        red.map(|r| r.quadratic_total),
        ANCHOR_I,
    ));

    let search = |m: &[i64], b: i64| -> Result<String> {
        let r = blowup::potential_jacobian_search(m, b)?;
        Ok(format!(
            "{:?}, certified {}",
            r.solutions,
            r.parity.certificate.is_some()
        ))
    };
    out.push(check("jacobian_search_1", "[[-1], [1]], certified false", search(&[1], 5), "potentially of Jacobian type"));
    out.push(check("jacobian_search_2", "[], certified true", search(&[2], 5), "potentially of Jacobian type"));
    out.push(check("jacobian_search_3_2", "[], certified false", search(&[3, 2], 5), "potentially of Jacobian type"));
    out.push(Check::new(
        "rational_map_indices",
        "(-1, 1)",
        format!("{:?}", blowup::rational_map_indices()),
        "rational fourfolds",
    ));
    out.push(Check::new(
        "receiving_multiplier_on_F",
        "1, 2, 6",
        format!(
            "{}, {}, {}",
            blowup::receiving_multiplier_on_f(1),
            blowup::receiving_multiplier_on_f(2),
            blowup::prym_multiplier(3)
        ),
        "Jacobian type and index",
    ));
    out
}
