//! The four-vortex quadrilateral elimination: four polynomials in a, b and
//! G1, G3, G4 (c normalized to 1) and the target polynomial they must imply.

use super::Polynomial;

pub const GENERATORS: [&str; 4] = [
    "a^2*(-G3)*(b+G4) + a*b*(-G4*(b-2*G3) + G1^2 + 2*G1*(G3+G4)) - b^2*G3*G4",
    "a^3*G3^2*(G1+G4) + a^2*G3*(-b*(G1^2 + G1*G3 + G4*(2*G3-G4)) - (G1-G3+G4)*(G1+G3+G4)^2) \
     - a*b*(G1^2*G4*(b-4*G3) + G1*(G4^2*(b+2*G4) + 2*G3^3 - 2*G3^2*G4 - 2*G3*G4^2) - G3^2*G4*(b+2*G4)) \
     - a*b*(2*b*G3*G4^2 - G1^4 - 2*G1^3*(G3+G4) + G3^4 + G4^4) \
     + b^2*G4*(G1*(G4*(b+G4) - 3*G3^2 - 2*G3*G4) + G3*G4*(b+G4) - G1^3 - G1^2*(3*G3+G4) - G3^3 - G3^2*G4 + G4^3)",
    "a^3*(G1+G4) + a^2*(G3*(2*G1+G3+2*G4) - b*(G1+2*G4)) + a*b*(b*G4 - 2*G1*G3 - G3^2 - 2*G3*G4) - b^2*G1*G4",
    "a^2*G3*(b-G1) - a*b*(b*(G1+2*G3) + G4*(2*G1+2*G3+G4)) + b^2*(b*(G1+G3) + G4*(2*G1+2*G3+G4))",
];

pub const TARGET: &str = "b^5*(G1+G3+G4)*(G1^2 + G1*G3 + G1*G4 + G3^2 + G3*G4 + G4^2)";

pub fn generators() -> Vec<Polynomial> {
    GENERATORS.iter().map(|s| Polynomial::parse(s).expect("static polynomial")).collect()
}

pub fn target() -> Polynomial {
    Polynomial::parse(TARGET).expect("static polynomial")
}
