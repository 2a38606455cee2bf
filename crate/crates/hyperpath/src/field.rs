//! GF(2^l) arithmetic for l in {8, 16, 32}.
//!
//! Elements are l-bit values interpreted as polynomials over GF(2) modulo a
//! fixed irreducible polynomial. Addition is XOR; multiplication is a
//! carry-less product reduced by the modulus. The 8- and 16-bit fields use
//! lazily built log/antilog tables, the 32-bit field multiplies directly.

use std::fmt;
use std::sync::OnceLock;

/// A binary extension field GF(2^DEGREE) with a fixed modulus.
pub trait BinaryField: Copy + Eq + fmt::Debug + Send + Sync + 'static {
    /// Extension degree l.
    const DEGREE: u32;
    /// Modulus polynomial bits, including the leading x^l term.
    const MODULUS: u64;
    const ZERO: Self;
    const ONE: Self;

    /// Wraps the low `DEGREE` bits of `bits`.
    fn from_bits(bits: u64) -> Self;
    fn to_bits(self) -> u64;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::from_bits(self.to_bits() ^ rhs.to_bits())
    }

    fn mul(self, rhs: Self) -> Self;

    #[inline]
    fn is_zero(self) -> bool {
        self.to_bits() == 0
    }
}

/// Carry-less product of two polynomials over GF(2), then reduction modulo
/// `modulus` of degree `degree`. Operands must have degree < `degree` <= 32.
fn clmul_reduce(a: u64, b: u64, modulus: u64, degree: u32) -> u64 {
    let mut acc: u64 = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
    }
    // Reduce: acc has degree < 2*degree.
    let mut bit = 2 * degree - 1;
    loop {
        if bit < degree {
            break;
        }
        if acc >> bit & 1 != 0 {
            acc ^= modulus << (bit - degree);
        }
        if bit == degree {
            break;
        }
        bit -= 1;
    }
    acc
}

/// Degree of the polynomial with the given bit pattern (-1 for zero, as
/// usize::MAX is never produced; callers only use it on nonzero inputs).
fn poly_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

/// Remainder of polynomial division over GF(2).
fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

/// Exhaustive trial division by every polynomial of degree 1..=degree/2.
pub fn is_irreducible(modulus: u64, degree: u32) -> bool {
    if poly_degree(modulus) != degree {
        return false;
    }
    for f in 2u64..(1u64 << (degree / 2 + 1)) {
        if poly_degree(f) >= 1 && poly_degree(f) <= degree / 2 && poly_mod(modulus, f) == 0 {
            return false;
        }
    }
    true
}

/// log/antilog tables over a multiplicative generator, built on first use.
struct LogTables {
    log: Vec<u32>, // indexed by element bits; log[0] unused
    exp: Vec<u32>, // exp[i] = g^i for i in [0, 2^l - 1), doubled to skip a mod
}

impl LogTables {
    fn build(modulus: u64, degree: u32) -> Self {
        let order = (1usize << degree) - 1;
        // Find a generator: its powers must visit every nonzero element.
        'candidate: for g in 2u64..(1u64 << degree) {
            let mut log = vec![u32::MAX; 1 << degree];
            let mut exp = vec![0u32; 2 * order];
            let mut x = 1u64;
            for (i, slot) in exp.iter_mut().enumerate().take(order) {
                if log[x as usize] != u32::MAX {
                    continue 'candidate; // cycle shorter than the full group
                }
                log[x as usize] = i as u32;
                *slot = x as u32;
                x = clmul_reduce(x, g, modulus, degree);
            }
            debug_assert_eq!(x, 1);
            // Doubled exp table: log(a) + log(b) < 2 * order needs no reduction.
            exp.copy_within(0..order, order);
            return Self { log, exp };
        }
        unreachable!("no generator found; modulus is not irreducible");
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize] as u64
    }
}

macro_rules! binary_field {
    ($name:ident, $repr:ty, $degree:expr, $modulus:expr, $tables:ident, $doc:expr) => {
        #[doc = $doc]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
        pub struct $name(pub $repr);

        static $tables: OnceLock<LogTables> = OnceLock::new();

        impl BinaryField for $name {
            const DEGREE: u32 = $degree;
            const MODULUS: u64 = $modulus;
            const ZERO: Self = Self(0);
            const ONE: Self = Self(1);

            #[inline]
            fn from_bits(bits: u64) -> Self {
                Self(bits as $repr)
            }

            #[inline]
            fn to_bits(self) -> u64 {
                self.0 as u64
            }

            #[inline]
            fn mul(self, rhs: Self) -> Self {
                let t = $tables.get_or_init(|| LogTables::build(Self::MODULUS, Self::DEGREE));
                Self(t.mul(self.0 as u64, rhs.0 as u64) as $repr)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:#x}", self.0)
            }
        }
    };
}

binary_field!(Gf8, u8, 8, 0x11B, GF8_TABLES, "GF(2^8) modulo x^8 + x^4 + x^3 + x + 1.");
binary_field!(Gf16, u16, 16, 0x1100B, GF16_TABLES, "GF(2^16) modulo x^16 + x^12 + x^3 + x + 1.");

/// GF(2^32) modulo x^32 + x^7 + x^5 + x^3 + x^2 + x + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf32(pub u32);

impl BinaryField for Gf32 {
    const DEGREE: u32 = 32;
    const MODULUS: u64 = 0x1_0000_00AF;
    const ZERO: Self = Self(0);
    const ONE: Self = Self(1);

    #[inline]
    fn from_bits(bits: u64) -> Self {
        Self(bits as u32)
    }

    #[inline]
    fn to_bits(self) -> u64 {
        self.0 as u64
    }

    fn mul(self, rhs: Self) -> Self {
        Self(clmul_reduce(self.0 as u64, rhs.0 as u64, Self::MODULUS, 32) as u32)
    }
}

impl fmt::Display for Gf32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Uniform nonzero field element.
pub fn random_nonzero<F: BinaryField, R: rand::Rng + ?Sized>(rng: &mut R) -> F {
    F::from_bits(rng.random_range(1..(1u64 << F::DEGREE)))
}

/// Field degrees this crate supports.
pub const SUPPORTED_DEGREES: [u32; 3] = [8, 16, 32];
