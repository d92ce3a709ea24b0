mod common;

use common::argmin_site;
use common::strategies::{builtin, coord, points};
use proptest::prelude::*;
use riemann_bregman::voronoi::{classify, rasterize, BBox, Flavor, SiteSet};
use riemann_bregman::Builtin;

fn sites_and_query() -> impl Strategy<Value = (Builtin, Vec<Vec<f64>>, Vec<f64>)> {
    builtin().prop_flat_map(|b| (Just(b), points(b, 2, 1..=10), prop::collection::vec(coord(b), 2)))
}

const FLAVORS: [Flavor; 4] = [Flavor::Left, Flavor::Right, Flavor::Symmetrized, Flavor::Riemann];

proptest! {
    #[test]
    fn riemann_cells_are_embedded_nearest((b, sites, q) in sites_and_query()) {
        let set = SiteSet::new(b.generator(), sites.clone()).unwrap();
        prop_assert_eq!(classify(&q, &set, Flavor::Riemann).unwrap(), argmin_site(b, &sites, &q));
    }

    #[test]
    fn every_site_owns_itself((b, sites, _q) in sites_and_query()) {
        // duplicates would legitimately hand the point to the lower index
        let distinct = sites.iter().enumerate().all(|(i, s)| sites[..i].iter().all(|t| t != s));
        prop_assume!(distinct);
        let set = SiteSet::new(b.generator(), sites.clone()).unwrap();
        for f in FLAVORS {
            for (i, s) in sites.iter().enumerate() {
                prop_assert_eq!(classify(s, &set, f).unwrap(), i, "{}", f);
            }
        }
    }

    #[test]
    fn euclidean_flavors_coincide(sites in points(Builtin::Euclidean, 2, 1..=8), q in prop::collection::vec(-20.0..20.0f64, 2)) {
        let set = SiteSet::new(Builtin::Euclidean.generator(), sites).unwrap();
        let want = classify(&q, &set, Flavor::Riemann).unwrap();
        for f in FLAVORS {
            prop_assert_eq!(classify(&q, &set, f).unwrap(), want);
        }
    }

    #[test]
    fn raster_matches_pointwise_classification((b, sites, _q) in sites_and_query(), f in prop::sample::select(FLAVORS.to_vec())) {
        let g = b.generator();
        let bbox = match b {
            Builtin::Shannon | Builtin::Burg => BBox::new(0.5, 40.0, 0.5, 40.0),
            _ => BBox::new(-5.0, 5.0, -5.0, 5.0),
        }
        .unwrap();
        let set = SiteSet::new(g, sites).unwrap();
        let r = rasterize(&set, f, bbox, 17, 11).unwrap();
        for row in 0..11 {
            for col in 0..17 {
                let p = r.pixel_center(col, row);
                prop_assert_eq!(r.label(col, row), classify(&p, &set, f).unwrap());
            }
        }
    }
}

#[test]
fn left_and_right_differ_somewhere_for_shannon() {
    let set = SiteSet::new(Builtin::Shannon.generator(), vec![vec![1.0, 1.0], vec![3.0, 3.0]]).unwrap();
    let bbox = BBox::new(0.05, 5.0, 0.05, 5.0).unwrap();
    let l = rasterize(&set, Flavor::Left, bbox, 64, 64).unwrap();
    let r = rasterize(&set, Flavor::Right, bbox, 64, 64).unwrap();
    assert_ne!(l.labels, r.labels);
}

#[test]
fn raster_is_schedule_independent() {
    let set = SiteSet::new(
        Builtin::Burg.generator(),
        vec![vec![1.0, 2.0], vec![3.0, 1.0], vec![2.0, 4.0], vec![5.0, 5.0]],
    )
    .unwrap();
    let bbox = BBox::new(0.1, 6.0, 0.1, 6.0).unwrap();
    let parallel = rasterize(&set, Flavor::Symmetrized, bbox, 64, 48).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| rasterize(&set, Flavor::Symmetrized, bbox, 64, 48).unwrap());
    assert_eq!(parallel, single);
}
