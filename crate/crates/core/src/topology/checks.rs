//! Decision procedures for maps between finite topologies. All three are
//! exact reformulations over minimal neighbourhoods:
//!
//! * `f` is continuous  ⟺  f(min(x)) ⊆ min(f(x)) for every x;
//! * `f` is an open map ⟺  f(min(x)) is open for every x;
//! * a projection `p` is a local homeomorphism ⟺ p is continuous and, at
//!   every total point `a`, p is injective on min(a) with
//!   p(min(a)) = min(p(a)) — then {min(a)} is the homeomorphism cover.
//!
//! Every negative answer carries a witness naming the failing point and
//! open set, because the test suite asserts lemmas with these.

use crate::error::{Error, Result};
use crate::topology::space::{point_set, FiniteTopology, PointSet};

fn format_points(s: &PointSet) -> String {
    let points: Vec<String> = s.ones().map(|x| x.to_string()).collect();
    format!("{{{}}}", points.join(", "))
}

/// Image of a point set under a total map into `0..codomain_size`.
fn image(map: &[usize], s: &PointSet, codomain_size: usize) -> PointSet {
    point_set(codomain_size, s.ones().map(|x| map[x]))
}

/// Check that `map` (a total function on point indices) is continuous.
pub fn is_continuous(map: &[usize], dom: &FiniteTopology, cod: &FiniteTopology) -> Result<()> {
    assert_eq!(map.len(), dom.point_count(), "map must be total");
    for x in 0..dom.point_count() {
        let target_min = cod.min_neighborhood(map[x]);
        for y in dom.min_neighborhood(x).ones() {
            if !target_min.contains(map[y]) {
                return Err(Error::NotContinuous {
                    open: format!("min({}) = {}", map[x], format_points(target_min)),
                    point: x,
                });
            }
        }
    }
    Ok(())
}

/// Check that `map` sends opens to opens.
pub fn is_open_map(map: &[usize], dom: &FiniteTopology, cod: &FiniteTopology) -> Result<()> {
    assert_eq!(map.len(), dom.point_count(), "map must be total");
    for x in 0..dom.point_count() {
        let img = image(map, dom.min_neighborhood(x), cod.point_count());
        if let Some(escape) = cod.open_violation(&img) {
            return Err(Error::NotOpenMap {
                point: x,
                image: format!(
                    "{} (its point {escape} has a minimal neighbourhood escaping it)",
                    format_points(&img)
                ),
            });
        }
    }
    Ok(())
}

/// Check that the projection `proj` is a local homeomorphism; on success
/// return the covering family: for each total point, the minimal
/// neighbourhood that `proj` maps homeomorphically onto an open set.
pub fn is_local_homeomorphism(
    proj: &[usize],
    total: &FiniteTopology,
    base: &FiniteTopology,
) -> Result<Vec<PointSet>> {
    is_continuous(proj, total, base)?;
    let mut cover = Vec::with_capacity(total.point_count());
    for a in 0..total.point_count() {
        let min = total.min_neighborhood(a);
        let img = image(proj, min, base.point_count());
        // Injectivity on the minimal neighbourhood.
        if img.count_ones(..) != min.count_ones(..) {
            let mut seen = vec![None; base.point_count()];
            for p in min.ones() {
                if let Some(q) = seen[proj[p]] {
                    return Err(Error::NotLocalHomeo {
                        point: a,
                        reason: format!(
                            "not injective on min({a}): points {q} and {p} both project to {}",
                            proj[p]
                        ),
                    });
                }
                seen[proj[p]] = Some(p);
            }
        }
        // The image must be exactly the minimal neighbourhood downstairs
        // (⊆ holds by continuity, so only ⊇ can fail).
        let base_min = base.min_neighborhood(proj[a]);
        if &img != base_min {
            return Err(Error::NotLocalHomeo {
                point: a,
                reason: format!(
                    "projection of min({a}) is {} but min({}) is {}",
                    format_points(&img),
                    proj[a],
                    format_points(base_min)
                ),
            });
        }
        cover.push(min.clone());
    }
    Ok(cover)
}
