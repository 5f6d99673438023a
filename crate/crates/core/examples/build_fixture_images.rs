//! Regenerates the bundled record corpus.
//!
//! Synthetic images are built as predicate subgroups, reduced to a small
//! generating set and written with the curve models.
//!
//! ```text
//! cargo run --release -p invfactor-core --example build_fixture_images -- crates/core/fixtures/curves.json
//! ```

use std::path::PathBuf;

use invfactor::arith::pow_mod;
use invfactor::coincidence::{all_coincidences, DivisionFieldFacts};
use invfactor::ffcurve::WeierstrassCurve;
use invfactor::glgroup::{MatrixEntries, ModMatrix, SubgroupClosure, DEFAULT_BUDGET};
use invfactor::harness::{CurveRecord, RecordFile};

fn dlog(base: u64, x: u64, m: u64) -> u64 {
    (0..m).find(|&k| pow_mod(base, k, m) == x % m).expect("unit")
}

fn entries(g: &ModMatrix) -> [u32; 4] {
    g.entries()
}

fn record(label: &str, a: [i64; 5]) -> CurveRecord {
    let disc = WeierstrassCurve::from_i64(a).expect("nonsingular");
    CurveRecord {
        label: label.into(),
        weierstrass: a,
        conductor: None,
        discriminant: disc.discriminant().to_string().parse().expect("fits"),
        cm: false,
        adelic_level: None,
        image_generators: Vec::new(),
        serre_delta_sf: None,
        serre_constant: None,
        metadata: None,
        synthetic: false,
        note: None,
    }
}

fn with_image(mut r: CurveRecord, h: &SubgroupClosure) -> CurveRecord {
    let gens = h.generating_set(DEFAULT_BUDGET).expect("generators");
    let check = SubgroupClosure::close(h.modulus(), &gens, DEFAULT_BUDGET).expect("closure");
    assert_eq!(check.order(), h.order(), "{}", r.label);
    r.adelic_level = Some(h.modulus());
    r.image_generators = gens.iter().map(MatrixEntries::from).collect();
    r.synthetic = true;
    eprintln!(
        "{}: m = {}, |H| = {}, {} generators, coincidences {:?}",
        r.label,
        h.modulus(),
        h.order(),
        gens.len(),
        all_coincidences(h, 2 * h.modulus() as u64, "")
            .expect("scan")
            .iter()
            .map(|c| (c.j, c.p))
            .collect::<Vec<_>>()
    );
    r
}

/// Mod 2 in a cyclic group of order 3 whose class matches a cubic character
/// of `det` mod 7 and one of the (1,1) entry mod 9, with the mod-9 part
/// diagonal mod 3.
fn cubic_seven_nine() -> SubgroupClosure {
    SubgroupClosure::from_predicate(126, "cubic-7-9", DEFAULT_BUDGET, |g| {
        let [a, b, c, d] = entries(g).map(u64::from);
        let theta = match [a % 2, b % 2, c % 2, d % 2] {
            [1, 0, 0, 1] => 0,
            [0, 1, 1, 1] => 1,
            [1, 1, 1, 0] => 2,
            _ => return false,
        };
        if b % 3 != 0 || c % 3 != 0 {
            return false;
        }
        let det7 = g.det() as u64 % 7;
        let k7 = dlog(3, det7, 7) % 3;
        let k9 = dlog(2, a % 9, 9) % 3;
        theta == k7 && k7 == k9
    })
    .expect("subgroup")
}

/// Borel mod 3 whose (1,1) entry is the quadratic character of `det` mod 5,
/// full mod 2.
fn borel_glued() -> SubgroupClosure {
    SubgroupClosure::from_predicate(30, "borel-3-5", DEFAULT_BUDGET, |g| {
        let [a, _, c, _] = entries(g);
        let det5 = g.det() % 5;
        let chi = if det5 == 1 || det5 == 4 { 1 } else { 2 };
        c % 3 == 0 && a % 3 == chi
    })
    .expect("subgroup")
}

/// `±A^e` mod 4 with `A = [[1,1],[0,-1]]`, the sign being the character of
/// `Q(sqrt -3)` read off `det` mod 3.
fn x60_twist() -> SubgroupClosure {
    SubgroupClosure::from_predicate(12, "x60-twist", DEFAULT_BUDGET, |g| {
        let [a, b, c, d] = entries(g).map(|x| x % 4);
        let sign_plus = g.det() % 3 == 1;
        let options: [([u32; 4], bool); 4] = [
            ([1, 0, 0, 1], true),
            ([1, 1, 0, 3], true),
            ([3, 0, 0, 3], false),
            ([3, 3, 0, 1], false),
        ];
        options.iter().any(|&(m, s)| m == [a, b, c, d] && s == sign_plus)
    })
    .expect("subgroup")
}

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("crates/core/fixtures/curves.json"));

    let mut recs = Vec::new();

    let mut r = record("19.a3", [0, 1, 1, 1, 0]);
    r.conductor = Some(19);
    r.note = Some("mod-3 image Borel; no image data bundled".into());
    recs.push(r);

    let mut r = record("50.b3", [1, 1, 1, -3, 1]);
    r.conductor = Some(50);
    r.note = Some("mod-3 image is the full Borel group of order 12".into());
    recs.push(r);

    let mut r = record("960.a5", [0, -1, 0, -641, 3105]);
    r.conductor = Some(960);
    r.metadata = Some(DivisionFieldFacts {
        zeta8_in_four_division: Some(true),
        eight_division_abelian_conductor: Some(120),
        ..Default::default()
    });
    recs.push(r);

    let mut r = record("189.b2", [0, 0, 0, -864, -5616]);
    r.conductor = Some(189);
    r.metadata = Some(DivisionFieldFacts {
        three_division_is_q_zeta3: Some(true),
        ..Default::default()
    });
    r.note = Some("Hesse model at t = 2".into());
    recs.push(r);

    let mut r = record("5184.j1", [0, 0, 0, -3, 4]);
    r.conductor = Some(5184);
    r.adelic_level = Some(4);
    r.note = Some("Q(E[4]) != Q(E[2]) != Q; image generators not bundled".into());
    recs.push(r);

    let mut r = record("37.a1", [0, 0, 1, -1, 0]);
    r.conductor = Some(37);
    r.adelic_level = Some(74);
    r.serre_delta_sf = Some(37);
    r.note = Some("Serre curve".into());
    recs.push(r);

    let mut r = record("serre-1", [0, 0, 0, 6, 4]);
    r.adelic_level = Some(4);
    r.serre_delta_sf = Some(-1);
    r.synthetic = true;
    r.note = Some("Serre image attached to a curve with squarefree discriminant -1".into());
    recs.push(r);

    let x60d = SubgroupClosure::close(4, &[ModMatrix::new(4, [1, 1, 0, 3]).unwrap()], DEFAULT_BUDGET).unwrap();
    let mut r = with_image(record("X60d-t1", [0, 0, 0, 1053, 24786]), &x60d);
    r.metadata = Some(DivisionFieldFacts {
        two_division_is_q_i: Some(true),
        four_division_abelian_conductor: Some(4),
        ..Default::default()
    });
    r.note = Some("X60d at t = 1; mod-4 image {I, [[1,1],[0,-1]]}".into());
    recs.push(r);

    let mut r = with_image(record("X60-twist-t1-d-3", [0, 0, 0, 9477, -669222]), &x60_twist());
    r.metadata = Some(DivisionFieldFacts {
        two_division_is_q_i: Some(true),
        four_division_abelian_conductor: Some(12),
        ..Default::default()
    });
    r.note = Some("X60d at t = 1 twisted by -3; mod-3 image full".into());
    recs.push(r);

    let full2 = SubgroupClosure::close(2, &[ModMatrix::identity(2)], DEFAULT_BUDGET).unwrap();
    let mut r = with_image(record("full-2-torsion", [0, 0, 0, -7, 6]), &full2);
    r.image_generators = vec![MatrixEntries([1, 0, 0, 1])];
    r.metadata = Some(DivisionFieldFacts {
        two_division_abelian_conductor: Some(1),
        ..Default::default()
    });
    r.note = Some("(x - 1)(x - 2)(x + 3); trivial mod-2 image, level 2".into());
    recs.push(r);

    let mut r = with_image(record("cubic-7", [0, 1, 0, -2, -1]), &cubic_seven_nine());
    r.metadata = Some(DivisionFieldFacts {
        two_division_abelian_conductor: Some(7),
        ..Default::default()
    });
    r.note = Some("Q(E[2]) = Q(zeta7)^+, also inside Q(E[9])".into());
    recs.push(r);

    let mut r = with_image(record("borel-15", [1, 1, 1, -3, 1]), &borel_glued());
    r.note = Some("50.b3 model; Borel mod 3 glued to the quadratic character mod 5".into());
    recs.push(r);

    let text = RecordFile::new(recs).to_canonical_json().expect("serialize");
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir).expect("mkdir");
    }
    std::fs::write(&out, text).expect("write");
    eprintln!("wrote {}", out.display());
}
