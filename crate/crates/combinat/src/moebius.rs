use crate::{Partition, PartitionError};

#[must_use]
pub fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// Moebius function of the interval `[a, b]` in the partition lattice.
///
/// The interval is isomorphic to a product of full partition lattices, one per
/// block of `b`, of rank equal to the number of `a`-blocks inside it.
pub fn moebius_coefficient(a: &Partition, b: &Partition) -> Result<i128, PartitionError> {
    let rel = a.relative_to(b)?;
    Ok(rel
        .blocks()
        .iter()
        .map(|blk| {
            let k = blk.len();
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sign * factorial(k - 1)
        })
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Moebius function from its defining recursion over the whole lattice.
    fn recursive_moebius(all: &[Partition]) -> HashMap<(usize, usize), i128> {
        let mut mu = HashMap::new();
        // sort by number of blocks descending so that intervals are filled bottom-up
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(all[i].n_blocks()));
        for &x in &order {
            for &y in &order {
                if !all[x].leq(&all[y]).unwrap() {
                    continue;
                }
                let value = if x == y {
                    1
                } else {
                    -order
                        .iter()
                        .filter(|&&z| {
                            z != y && all[x].leq(&all[z]).unwrap() && all[z].leq(&all[y]).unwrap()
                        })
                        .map(|&z| mu[&(x, z)])
                        .sum::<i128>()
                };
                mu.insert((x, y), value);
            }
        }
        mu
    }

    #[test]
    fn closed_form_matches_recursion_on_p4() {
        let all: Vec<_> = Partition::bottom(4).enumerate_above().collect();
        let mu = recursive_moebius(&all);
        let bot = all.iter().position(|p| p.is_bottom()).unwrap();
        let top = all.iter().position(|p| p.n_blocks() == 1).unwrap();
        assert_eq!(mu[&(bot, top)], -6);
        for (&(x, y), &m) in &mu {
            assert_eq!(
                moebius_coefficient(&all[x], &all[y]).unwrap(),
                m,
                "{} {}",
                all[x],
                all[y]
            );
        }
    }

    #[test]
    fn examples() {
        let p = Partition::from_blocks(3, [vec![0, 2], vec![1]]).unwrap();
        assert_eq!(moebius_coefficient(&p, &p).unwrap(), 1);
        assert_eq!(
            moebius_coefficient(&Partition::bottom(3), &Partition::top(3)).unwrap(),
            2
        );
        assert_eq!(
            moebius_coefficient(&Partition::bottom(4), &Partition::top(4)).unwrap(),
            -6
        );
        assert_eq!(
            moebius_coefficient(&Partition::top(3), &p),
            Err(PartitionError::NotComparable)
        );
    }

    #[test]
    fn bottom_formula() {
        // mu(bottom, b) = prod (-1)^(n_i - 1) (n_i - 1)!
        let b = Partition::from_blocks(6, [vec![0, 1, 2], vec![3, 4], vec![5]]).unwrap();
        assert_eq!(
            moebius_coefficient(&Partition::bottom(6), &b).unwrap(),
            2 * -1
        );
    }

    #[test]
    fn defining_identity_on_p4() {
        // sum over a <= p <= b of mu(p, b) = [a == b]
        let all: Vec<_> = Partition::bottom(4).enumerate_above().collect();
        for a in &all {
            for b in all.iter().filter(|b| a.leq(b).unwrap()) {
                let s: i128 = a
                    .enumerate_above()
                    .filter(|p| p.leq(b).unwrap())
                    .map(|p| moebius_coefficient(&p, b).unwrap())
                    .sum();
                assert_eq!(s, i128::from(a == b));
            }
        }
    }
}
