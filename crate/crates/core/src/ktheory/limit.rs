use super::group::{FgAbelianGroup, GroupHom};
use super::{kgroups, KError, KGroups};
use crate::graph::Chain;

/// Finite approximation of the direct limit of a chain.
///
/// `G_N` is the image of `K_•(F_N)` in `K_•` of the final stage, for every
/// stage but the last. The limit is declared stable when the last `window`
/// images are the same subgroup; this is a heuristic, not a proof.
#[derive(Debug, Clone)]
pub struct LimitReport {
    /// The last image `G_{N-1}` in `K₀` of the final stage.
    pub k0: FgAbelianGroup,
    pub k1: FgAbelianGroup,
    pub stabilized: bool,
    pub window: usize,
    /// Canonical type of each image, by stage.
    pub k0_images: Vec<String>,
    pub k1_images: Vec<String>,
}

pub fn direct_limit(c: &Chain, window: usize) -> Result<LimitReport, KError> {
    if window < 2 {
        return Err(KError::WindowTooSmall(window));
    }
    if c.len() < window + 1 {
        return Err(KError::ChainTooShort {
            len: c.len(),
            window,
        });
    }
    let groups: Vec<KGroups> = c.stages().iter().map(kgroups).collect();
    let (last, earlier) = groups.split_last().expect("chain is nonempty");

    let mut k0_images = Vec::with_capacity(earlier.len());
    let mut k1_images = Vec::with_capacity(earlier.len());
    for g in earlier {
        k0_images.push(GroupHom::induced_by_labels(&g.k0, &last.k0)?.image());
        k1_images.push(GroupHom::induced_by_labels(&g.k1, &last.k1)?.image());
    }

    let stable = |images: &[FgAbelianGroup]| {
        images[images.len() - window..]
            .windows(2)
            .all(|w| w[0].same_subgroup(&w[1]))
    };
    let stabilized = stable(&k0_images) && stable(&k1_images);
    Ok(LimitReport {
        k0_images: k0_images.iter().map(FgAbelianGroup::canonical).collect(),
        k1_images: k1_images.iter().map(FgAbelianGroup::canonical).collect(),
        k0: k0_images.pop().unwrap(),
        k1: k1_images.pop().unwrap(),
        stabilized,
        window,
    })
}
