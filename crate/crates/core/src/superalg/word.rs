//! Sign bookkeeping for odd words stored as bitmasks.
//!
//! Bit `b` of a word is set when the odd generator with canonical index `b`
//! occurs. Words are read in increasing bit order, so a bitmask denotes the
//! canonically ordered wedge of its generators.

#[inline]
fn odd_count(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

#[inline]
fn bits_above(word: u64, bit: u32) -> u64 {
    if bit >= 63 {
        0
    } else {
        word >> (bit + 1)
    }
}

#[inline]
fn bits_below(word: u64, bit: u32) -> u64 {
    word & ((1u64 << bit) - 1)
}

/// Sign of `left ∧ right` relative to the canonical word `left | right`.
///
/// Returns `None` when the words share a generator (the product vanishes),
/// otherwise `Some(true)` when reordering introduces a minus sign.
pub fn merge_sign(left: u64, right: u64) -> Option<bool> {
    if left & right != 0 {
        return None;
    }
    let mut negative = false;
    let mut rest = right;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        if odd_count(bits_above(left, bit)) {
            negative = !negative;
        }
    }
    Some(negative)
}

/// Sign picked up by moving generator `bit` of `word` to the front.
#[inline]
pub fn left_extract_sign(word: u64, bit: u32) -> bool {
    odd_count(bits_below(word, bit))
}

/// Sign picked up by moving generator `bit` of `word` to the back.
#[inline]
pub fn right_extract_sign(word: u64, bit: u32) -> bool {
    odd_count(bits_above(word, bit))
}

/// Iterates over the set bits of a word in increasing order.
pub fn bits(word: u64) -> impl Iterator<Item = u32> {
    let mut rest = word;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            Some(bit)
        }
    })
}
