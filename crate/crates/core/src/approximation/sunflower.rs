use std::collections::HashSet;

/// `p` sets whose pairwise intersections all equal `core`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sunflower {
    pub core: Vec<usize>,
    /// Indices into the searched family, ascending.
    pub members: Vec<usize>,
}

/// Deterministic Erdős–Rado search for a `p`-sunflower among distinct sorted
/// sets. A greedy maximal disjoint subfamily (scanning by largest element,
/// then lexicographically) is returned if it reaches `p` sets; otherwise the
/// search recurses into the link of the most frequent element, smallest
/// element first on ties.
///
/// Always succeeds when the family has more than `(p-1)^l · l!` distinct
/// sets of size at most `l`.
pub fn find_sunflower(family: &[Vec<usize>], p: usize) -> Option<Sunflower> {
    if p == 0 {
        return Some(Sunflower { core: Vec::new(), members: Vec::new() });
    }
    let mut seen = HashSet::with_capacity(family.len());
    let sets: Vec<(usize, Vec<usize>)> = family
        .iter()
        .enumerate()
        .filter(|(_, s)| seen.insert((*s).clone()))
        .map(|(i, s)| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            (i, s)
        })
        .collect();
    let (mut core, mut members) = search(sets, p)?;
    core.sort_unstable();
    members.sort_unstable();
    Some(Sunflower { core, members })
}

fn search(mut sets: Vec<(usize, Vec<usize>)>, p: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if sets.len() < p {
        return None;
    }
    sets.sort_by(|(_, a), (_, b)| a.last().cmp(&b.last()).then_with(|| a.cmp(b)));

    let mut used: HashSet<usize> = HashSet::new();
    let mut disjoint = Vec::new();
    for (idx, s) in &sets {
        if s.iter().all(|v| !used.contains(v)) {
            used.extend(s.iter().copied());
            disjoint.push(*idx);
            if disjoint.len() == p {
                return Some((Vec::new(), disjoint));
            }
        }
    }

    let mut freq: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for (_, s) in &sets {
        for &v in s {
            *freq.entry(v).or_default() += 1;
        }
    }
    // max by count, ties to the smallest element
    let (&pivot, &count) = freq.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))?;
    if count < p {
        return None;
    }
    let link: Vec<(usize, Vec<usize>)> = sets
        .into_iter()
        .filter(|(_, s)| s.binary_search(&pivot).is_ok())
        .map(|(i, s)| (i, s.into_iter().filter(|&v| v != pivot).collect()))
        .collect();
    let (mut core, members) = search(link, p)?;
    core.push(pivot);
    Some((core, members))
}

/// Whether the selected sets really form a sunflower with the given core.
pub fn is_sunflower(family: &[Vec<usize>], flower: &Sunflower) -> bool {
    let sets: Vec<HashSet<usize>> = flower.members.iter().map(|&i| family[i].iter().copied().collect()).collect();
    let core: HashSet<usize> = flower.core.iter().copied().collect();
    let distinct: HashSet<Vec<usize>> = flower
        .members
        .iter()
        .map(|&i| {
            let mut s = family[i].clone();
            s.sort_unstable();
            s
        })
        .collect();
    distinct.len() == sets.len()
        && (0..sets.len()).all(|a| (a + 1..sets.len()).all(|b| sets[a].intersection(&sets[b]).copied().collect::<HashSet<_>>() == core))
        && (sets.len() != 1 || core.is_subset(&sets[0]))
}
