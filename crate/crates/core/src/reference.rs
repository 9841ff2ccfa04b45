//! Reference schemes and codes used as golden data. Character `i` of a
//! row string is column `i`.

use crate::gf2::BitMatrix;

/// Probing matrix of the OPS(7,4;2) scheme (a [7,4,3] Hamming parity check).
pub const OPS_7_4_2: [&str; 3] = ["1101100", "1011010", "0111001"];

/// Probing matrix of the OPS(16,11;3) scheme (a [16,11,4] Hsiao parity check).
pub const OPS_16_11_3: [&str; 5] = [
    "1111110000110000",
    "1110001110101000",
    "1001101101100100",
    "0101011011100010",
    "0010110111100001",
];

/// Probing matrix of the OPS(17,9;4) scheme, from the [17,9,5] quadratic
/// residue code with generator polynomial x^8+x^5+x^4+x^3+1.
pub const OPS_17_9_4: [&str; 8] = [
    "10011110010000000",
    "01001111001000000",
    "00100111100100000",
    "10001101100010000",
    "11011000100001000",
    "11110010000000100",
    "01111001000000010",
    "00111100100000001",
];

/// Generator of the OTR(7,4,1;2,2) code.
pub const OTR_7_4_1_2_2: [&str; 4] = ["1000110", "1100011", "1010101", "0001111"];

/// Parity-check matrix the OTR(7,4,1;2,2) code starts from.
pub const OTR_7_4_1_2_2_PARITY: [&str; 3] = OPS_7_4_2;

/// Generator of the OTR(16,11,6;3,3) code.
pub const OTR_16_11_6_3_3: [&str; 11] = [
    "1000000000011100",
    "0100000000011010",
    "0010000000011001",
    "0001000000010110",
    "0000100000010101",
    "0000010000010011",
    "1111101000010010",
    "1010010100011011",
    "1001110010000111",
    "1110100001001101",
    "1101010000111100",
];

/// Parity-check matrix the OTR(16,11,6;3,3) code starts from.
pub const OTR_16_11_6_3_3_PARITY: [&str; 5] = OPS_16_11_3;

pub fn matrix(rows: &[&str]) -> BitMatrix {
    BitMatrix::from_strs(rows).expect("embedded matrix is well formed")
}
