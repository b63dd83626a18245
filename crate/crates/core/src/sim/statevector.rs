use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{usage, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 30;

/// Gates understood by [`Statevector::apply`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    X,
    Ry(f64),
    Rz(f64),
    /// Phase gate `diag(1, i)`.
    S,
    /// `diag(1, -i)`.
    Sdg,
    /// Qubits `[control, target]`.
    Cnot,
    /// Controlled `Ry`, qubits `[control, target]`.
    CRy(f64),
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::Cnot | Gate::CRy(_) => 2,
            _ => 1,
        }
    }
}

/// Dense register state; bit `q` of an amplitude index is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amps: Vec<Complex64>,
    qubits: usize,
}

impl Statevector {
    /// `|0…0⟩` on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self> {
        if qubits > MAX_QUBITS {
            return Err(crate::Error::Capacity(format!(
                "{qubits} qubits exceed the dense limit of {MAX_QUBITS}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { amps, qubits })
    }

    /// Wrap explicit amplitudes; the length must be a power of two and the
    /// norm 1 within `1e-10`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(usage!("amplitude count {len} is not a power of two"));
        }
        let s = Self {
            qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(usage!("state norm is {norm}, expected 1"));
        }
        Ok(s)
    }

    pub(crate) fn from_raw(amps: Vec<Complex64>, qubits: usize) -> Self {
        debug_assert_eq!(amps.len(), 1 << qubits);
        Self { amps, qubits }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.qubits != other.qubits {
            return Err(usage!(
                "qubit count mismatch: {} vs {}",
                self.qubits,
                other.qubits
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Apply `gate` to `qubits` (`[control, target]` for two-qubit gates).
    pub fn apply(&mut self, gate: Gate, qubits: &[usize]) -> Result<()> {
        if qubits.len() != gate.arity() {
            return Err(usage!(
                "{gate:?} acts on {} qubits, got {}",
                gate.arity(),
                qubits.len()
            ));
        }
        if let Some(q) = qubits.iter().find(|&&q| q >= self.qubits) {
            return Err(usage!("qubit {q} out of range for {} qubits", self.qubits));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(usage!("control and target must differ"));
        }
        match gate {
            Gate::H => self.h(qubits[0]),
            Gate::X => self.x(qubits[0]),
            Gate::Ry(t) => self.ry(qubits[0], t),
            Gate::Rz(t) => self.rz(qubits[0], t),
            Gate::S => self.phase(qubits[0], Complex64::new(0.0, 1.0)),
            Gate::Sdg => self.phase(qubits[0], Complex64::new(0.0, -1.0)),
            Gate::Cnot => self.cnot(qubits[0], qubits[1]),
            Gate::CRy(t) => self.cry(qubits[0], qubits[1], t),
        }
        Ok(())
    }

    /// Visit every amplitude pair `(i, i | 1<<target)` with the target bit
    /// clear, optionally only where `control` is set.
    #[inline]
    fn for_pairs<F>(&mut self, target: usize, control: Option<usize>, mut f: F)
    where
        F: FnMut(&mut Complex64, &mut Complex64),
    {
        let stride = 1usize << target;
        let cmask = control.map_or(0, |c| 1usize << c);
        let n = self.amps.len();
        let mut base = 0;
        while base < n {
            let (lo, hi) = self.amps[base..base + 2 * stride].split_at_mut(stride);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + k) & cmask == cmask {
                    f(a, b);
                }
            }
            base += 2 * stride;
        }
    }

    pub(crate) fn h(&mut self, q: usize) {
        self.for_pairs(q, None, |a, b| {
            let (x, y) = (*a, *b);
            *a = (x + y) * FRAC_1_SQRT_2;
            *b = (x - y) * FRAC_1_SQRT_2;
        });
    }

    pub(crate) fn x(&mut self, q: usize) {
        self.for_pairs(q, None, std::mem::swap);
    }

    pub(crate) fn ry(&mut self, q: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        self.for_pairs(q, None, |a, b| {
            let (x, y) = (*a, *b);
            *a = x * c - y * s;
            *b = x * s + y * c;
        });
    }

    pub(crate) fn rz(&mut self, q: usize, theta: f64) {
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = Complex64::from_polar(1.0, theta / 2.0);
        self.for_pairs(q, None, |a, b| {
            *a *= lo;
            *b *= hi;
        });
    }

    fn phase(&mut self, q: usize, p: Complex64) {
        self.for_pairs(q, None, |_, b| *b *= p);
    }

    pub(crate) fn cnot(&mut self, control: usize, target: usize) {
        self.for_pairs(target, Some(control), std::mem::swap);
    }

    pub(crate) fn cry(&mut self, control: usize, target: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        self.for_pairs(target, Some(control), |a, b| {
            let (x, y) = (*a, *b);
            *a = x * c - y * s;
            *b = x * s + y * c;
        });
    }
}
