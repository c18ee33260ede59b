//! The nine face tiles as sets of edge-midpoint connections.

/// Edge roles of a face.
pub const B: usize = 0;
pub const R: usize = 1;
pub const T: usize = 2;
pub const L: usize = 3;

/// Midpoint of each role in doubled face coordinates.
pub const POS: [(i64, i64); 4] = [(1, 0), (2, 1), (1, 2), (0, 1)];

const NONE: u8 = 4;

/// `PARTNER[t][role]` is the role joined to `role` on tile t+1, or 4.
pub const PARTNER: [[u8; 4]; 9] = {
    let n = NONE;
    [
        [n, n, n, n],
        [L as u8, n, n, B as u8],
        [n, T as u8, R as u8, n],
        [n, n, L as u8, T as u8],
        [R as u8, B as u8, n, n],
        [n, L as u8, n, R as u8],
        [T as u8, n, B as u8, n],
        [L as u8, T as u8, R as u8, B as u8],
        [R as u8, B as u8, L as u8, T as u8],
    ]
};

/// Role joined to `role` on `tile` (1..=9).
pub fn partner(tile: u8, role: usize) -> Option<usize> {
    let q = PARTNER[tile as usize - 1][role];
    (q != NONE).then_some(q as usize)
}

pub fn occupied(tile: u8, role: usize) -> bool {
    PARTNER[tile as usize - 1][role] != NONE
}

pub const DENSE_TILES: [u8; 2] = [8, 9];
pub const DILUTE_TILES: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partner_is_involutive() {
        for t in 1..=9u8 {
            for r in 0..4 {
                if let Some(q) = partner(t, r) {
                    assert_eq!(partner(t, q), Some(r));
                    assert_ne!(q, r);
                }
            }
        }
    }

    #[test]
    fn dense_tiles_are_full() {
        for t in DENSE_TILES {
            assert!((0..4).all(|r| occupied(t, r)));
        }
    }

    #[test]
    fn crossing_symmetry_pairs() {
        // mirror left/right maps tile sets {2,3,8} <-> {4,5,9} and 6 <-> 6
        let mirror = |r: usize| match r {
            L => R,
            R => L,
            x => x,
        };
        let image = |t: u8| {
            (1..=9u8)
                .find(|&s| (0..4).all(|r| partner(s, mirror(r)) == partner(t, r).map(mirror)))
                .unwrap()
        };
        assert_eq!(image(2), 5);
        assert_eq!(image(3), 4);
        assert_eq!(image(8), 9);
        assert_eq!(image(6), 6);
        assert_eq!(image(7), 7);
    }
}
