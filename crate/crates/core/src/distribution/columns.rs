//! Column functions of the determinants, each with its Taylor data in y.

use std::cell::RefCell;

use crate::error::Result;
use crate::h_integrals::{h_eval, HIndex};
use crate::special_fn::{hpg01, pochhammer};

use super::confluent::ColumnFn;
use super::forms::HolForm;

fn factorial(s: usize) -> f64 {
    (1..=s).map(|i| i as f64).product()
}

/// H^k_ν(x, y) by quadrature; ∂_y^s H^k_ν = H^{k+s}_{ν+s}/(ν)_s.
pub struct HCol {
    pub k: u32,
    pub nu: u32,
    pub x: f64,
}

impl ColumnFn for HCol {
    fn value(&self, y: f64) -> Result<f64> {
        h_eval(HIndex::new(self.k, self.nu), self.x, y)
    }

    fn taylor(&self, c: f64, s: usize) -> Result<f64> {
        let h = h_eval(HIndex::new(self.k + s as u32, self.nu + s as u32), self.x, c)?;
        Ok(h / (pochhammer(self.nu as f64, s as u32) * factorial(s)))
    }
}

/// scale·x^k e^{−x} 0F1(ν; xy), i.e. ∂_x H^k_ν(x, y) when scale = 1.
pub struct HypCol {
    pub k: u32,
    pub nu: u32,
    pub x: f64,
    pub scale: f64,
}

impl HypCol {
    fn front(&self) -> f64 {
        self.scale * self.x.powi(self.k as i32) * (-self.x).exp()
    }
}

impl ColumnFn for HypCol {
    fn value(&self, y: f64) -> Result<f64> {
        let f = self.front();
        if f == 0.0 {
            return Ok(0.0);
        }
        Ok(f * hpg01(self.nu as f64, self.x * y)?)
    }

    fn taylor(&self, c: f64, s: usize) -> Result<f64> {
        if self.front() == 0.0 {
            return Ok(0.0);
        }
        let nu = self.nu as f64;
        let d = self.x.powi(s as i32) * hpg01(nu + s as f64, self.x * c)? / pochhammer(nu, s as u32);
        Ok(self.front() * d / factorial(s))
    }
}

/// e^{−x}·form(x, y), with y-derivatives taken symbolically on demand.
pub struct FormCol {
    pub x: f64,
    ders: RefCell<Vec<HolForm>>,
}

impl FormCol {
    pub fn new(form: HolForm, x: f64) -> Self {
        FormCol { x, ders: RefCell::new(vec![form]) }
    }
}

impl ColumnFn for FormCol {
    fn value(&self, y: f64) -> Result<f64> {
        Ok(self.ders.borrow()[0].eval_scaled(self.x, y)?.0)
    }

    fn taylor(&self, c: f64, s: usize) -> Result<f64> {
        {
            let mut d = self.ders.borrow_mut();
            while d.len() <= s {
                let next = d.last().unwrap().derivative();
                d.push(next);
            }
        }
        Ok(self.ders.borrow()[s].eval_scaled(self.x, c)?.0 / factorial(s))
    }
}
