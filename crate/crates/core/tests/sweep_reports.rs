use proptest::prelude::*;

use selfsim_core::report::{from_json, to_csv, to_json, to_svg, CSV_HEADER};
use selfsim_core::sweep::{farey_slopes_brute, PlanFile};
use selfsim_core::{
    carpet_family, farey_slopes, run_sweep, Metric, Param, RationalScalar, SweepPlan,
};

fn r(p: i64, q: i64) -> RationalScalar {
    RationalScalar::new(p, q)
}

fn small_plan() -> SweepPlan {
    let mut plan = SweepPlan::new(carpet_family());
    plan.rational_slopes = Some(1);
    plan.float_grid = 3;
    plan.depths = vec![1, 2, 3];
    plan.samples = 5_000;
    plan
}

#[test]
fn csv_header_is_fixed() {
    let csv = to_csv(&run_sweep(&small_plan()).unwrap());
    assert_eq!(
        csv.lines().next().unwrap(),
        "parameter,param_kind,sim_dim,delta_n,has_collision,d_n,depth,rho_n,entropy_nats,witnesses,phi,budget,errors"
    );
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(csv.lines().count(), 1 + 11 + 3);
}

#[test]
fn json_round_trips() {
    let recs = run_sweep(&small_plan()).unwrap();
    assert_eq!(from_json(&to_json(&recs)).unwrap(), recs);
}

#[test]
fn svg_has_one_marker_per_record() {
    let mut plan = small_plan();
    let recs = run_sweep(&plan).unwrap();
    assert_eq!(
        to_svg(&recs).matches("<circle class=\"marker").count(),
        recs.len()
    );
    plan.metrics.clear();
    let bare = run_sweep(&plan).unwrap();
    let svg = to_svg(&bare);
    assert_eq!(svg.matches("<circle class=\"marker").count(), bare.len());
    assert_eq!(svg.matches("marker missing").count(), bare.len());
}

#[test]
fn records_are_ordered_and_float_lane_is_tagged() {
    let recs = run_sweep(&small_plan()).unwrap();
    let xs: Vec<f64> = recs.iter().map(|r| r.parameter.to_f64()).collect();
    assert!(xs.windows(2).all(|w| w[0] <= w[1]));
    for rec in &recs {
        if let Param::Float(_) = rec.parameter {
            assert!(rec
                .separation
                .as_ref()
                .unwrap()
                .has_collision
                .iter()
                .all(|&c| !c));
            assert!(rec.witnesses.is_none() && rec.phi_values.is_none());
        }
    }
}

#[test]
fn jobs_do_not_change_output() {
    let mut plan = small_plan();
    plan.parallelism = 1;
    let a = run_sweep(&plan).unwrap();
    plan.parallelism = 8;
    let b = run_sweep(&plan).unwrap();
    assert_eq!(to_csv(&a), to_csv(&b));
    assert_eq!(to_json(&a), to_json(&b));
}

#[test]
fn rational_slopes_lose_entropy_with_depth() {
    let mut plan = SweepPlan::new(carpet_family());
    plan.rational_slopes = Some(4);
    plan.metrics = [Metric::Entropy].into_iter().collect();
    plan.depths = vec![1, 2, 4, 8];
    plan.parallelism = 8;
    let recs = run_sweep(&plan).unwrap();
    assert!(!recs.is_empty());
    for rec in recs {
        let d = rec.dimension.unwrap();
        let (d1, d8) = (d.ratio_at(1).unwrap(), d.ratio_at(8).unwrap());
        if rec.parameter.to_f64() == 0.0 {
            // slope 0: digits 0, 1, 2 in base 3 never regroup past level 1
            assert_eq!(d8, d1);
        } else {
            assert!(d8 < d1, "u = {}: d_8 = {d8}, d_1 = {d1}", rec.parameter);
        }
        assert!(rec.separation.is_none() && rec.witnesses.is_none());
    }
}

#[test]
fn collision_implies_entropy_below_the_line() {
    let mut plan = SweepPlan::new(carpet_family());
    plan.rational_slopes = Some(3);
    plan.metrics = [Metric::Separation, Metric::Entropy].into_iter().collect();
    plan.depths = vec![1, 2, 3, 4];
    let line = plan.family.weight_entropy();
    for rec in run_sweep(&plan).unwrap() {
        let sep = rec.separation.unwrap();
        let dim = rec.dimension.unwrap();
        for (k, &n) in sep.depths.iter().enumerate() {
            if sep.has_collision[k] {
                assert!(
                    dim.entropy_at(n).unwrap() < n as f64 * line,
                    "u = {} n = {n}",
                    rec.parameter
                );
            }
        }
    }
}

#[test]
fn plan_file_parses() {
    let plan = PlanFile::parse(
        "family = \"carpet\"\nqmax = 2\ndepths = [1, 2]\nmetrics = [\"entropy\", \"overlaps\"]\njobs = 2\nseed = 7\n",
    )
    .unwrap()
    .into_plan()
    .unwrap();
    assert_eq!(plan.rational_slopes, Some(2));
    assert_eq!(plan.parallelism, 2);
    assert_eq!(plan.seed, 7);
    assert_eq!(plan.metrics.len(), 2);
    assert!(PlanFile::parse("family = \"carpet\"\nbogus = 1\n").is_err());
    assert!(PlanFile::parse("family = \"carpet\"\n")
        .unwrap()
        .into_plan()
        .is_err());
}

#[test]
fn farey_third_order() {
    let got = farey_slopes((&r(0, 1), &r(1, 1)), 3).unwrap();
    assert_eq!(got, vec![r(0, 1), r(1, 3), r(1, 2), r(2, 3), r(1, 1)]);
}

proptest! {
    #[test]
    fn farey_matches_double_loop(a in -30i64..30, b in 1i64..6, w in 1i64..40, c in 1i64..6, q in 1u64..9) {
        let lo = r(a, b);
        let hi = lo.clone() + r(w, c);
        let fast = farey_slopes((&lo, &hi), q).unwrap();
        prop_assert_eq!(&fast, &farey_slopes_brute((&lo, &hi), q));
        prop_assert!(fast.windows(2).all(|p| p[0] < p[1]));
        prop_assert!(fast.iter().all(|x| x.denom() <= &q.into() && lo <= *x && *x <= hi));
    }
}
