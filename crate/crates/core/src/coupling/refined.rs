use crate::dynamics::{ChainState, UpdateEvent};
use crate::error::{Error, Result};
use crate::states::{LatticePath, PartialOrderExt};

/// Whether the refined rule lets the pair share the event's mark at `site`.
///
/// Marks are shared where the heights agree. They are also shared in the
/// one configuration where independent marks could cross the paths: gap 2
/// with the lower path at a local minimum and the upper one at a local
/// maximum. Everywhere else the upper path draws its own mark. The choice
/// depends only on the pre-event pair, so each path alone still sees i.i.d.
/// uniform marks.
#[inline]
pub(crate) fn shares_mark(lower: &LatticePath, upper: &LatticePath, site: usize) -> bool {
    let (a, b) = (lower.height(site), upper.height(site));
    a == b || (b - a == 2 && lower.is_local_min(site) && upper.is_local_max(site))
}

/// Applies one refined update in place; returns whether `independent` was
/// consumed.
#[inline]
pub(crate) fn refined_update(
    lower: &mut LatticePath,
    upper: &mut LatticePath,
    site: usize,
    mark: f64,
    independent: f64,
    p: f64,
) -> bool {
    let shared = shares_mark(lower, upper, site);
    lower.apply(site, mark, p);
    upper.apply(site, if shared { mark } else { independent }, p);
    debug_assert!(lower.height(site) <= upper.height(site));
    !shared
}

/// One step of the refined coupling of an ordered pair `lower ≤ upper` of
/// lattice paths.
///
/// `independent` is the upper path's private mark, used only where the
/// rule calls for independent flips.
pub fn coupled_step_refined(
    pair: (LatticePath, LatticePath),
    event: UpdateEvent,
    independent: f64,
    p: f64,
) -> Result<(LatticePath, LatticePath)> {
    let (mut lower, mut upper) = pair;
    if !lower.partial_le(&upper)? {
        return Err(Error::NotOrdered);
    }
    if event.site == 0 || event.site >= lower.n() {
        return Err(crate::error::out_of_range("site", format!("{}", event.site)));
    }
    refined_update(&mut lower, &mut upper, event.site, event.mark, independent, p);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::extremal_paths;

    fn ev(site: usize, mark: f64) -> UpdateEvent {
        UpdateEvent {
            time: 0.0,
            site,
            mark,
        }
    }

    #[test]
    fn equal_pair_moves_like_graphical() {
        let (top, _) = extremal_paths(6, 3).unwrap();
        let (a, b) = coupled_step_refined((top.clone(), top.clone()), ev(3, 0.1), 0.9, 0.5).unwrap();
        assert_eq!(a, b);
        let mut g = top.clone();
        g.apply(3, 0.1, 0.5);
        assert_eq!(a, g);
    }

    #[test]
    fn crossing_configuration_shares_marks() {
        // Site 2: lower has a local min at -2, upper a local max at 0.
        let lower: LatticePath = "0,-1,-2,-1,0".parse().unwrap();
        let upper: LatticePath = "0,1,0,1,0".parse().unwrap();
        assert!(!shares_mark(&lower, &upper, 2));
        let lower: LatticePath = "0,-1,-2,-1,0".parse().unwrap();
        let upper: LatticePath = "0,-1,0,-1,0".parse().unwrap();
        assert!(shares_mark(&lower, &upper, 2));
        for (m, ind) in [(0.9, 0.1), (0.1, 0.9)] {
            let (a, b) =
                coupled_step_refined((lower.clone(), upper.clone()), ev(2, m), ind, 0.5).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn unordered_pair_rejected() {
        let (top, bottom) = extremal_paths(4, 2).unwrap();
        assert_eq!(
            coupled_step_refined((top, bottom), ev(1, 0.5), 0.5, 0.5),
            Err(Error::NotOrdered)
        );
    }
}
