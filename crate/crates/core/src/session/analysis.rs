use std::sync::OnceLock;

use serde::Serialize;

use crate::criteria::{
    check_cortadellas_zarzuela, check_valabrega_valla, cm_test_fiber, depth_lower_bound, theorem_checklist, ChecklistInputs, ChecklistVerdict, CmVerdict, CriteriaError, CzVerdict,
    DepthCertificate, FiberCmTest, Target, ValabregaValla,
};
use crate::invariants::{default_window, hilbert_series_f, hilbert_series_g, length_sum, minimal_reduction_check, reduction_data, Blowup, Family, HilbertSeries, LengthTable, ReductionData};

/// Lazily computed invariants of one pair `(I, J)`.
pub struct Analysis {
    pub blowup: Blowup,
    pub cap: u32,
    nmax: Option<u32>,
    reduction: OnceLock<ReductionData>,
    minimal: OnceLock<bool>,
    tables: [OnceLock<LengthTable>; 5],
    series_g: OnceLock<HilbertSeries>,
    series_f: OnceLock<HilbertSeries>,
    fiber: OnceLock<FiberCmTest>,
    depth_g: OnceLock<DepthCertificate>,
    depth_f: OnceLock<DepthCertificate>,
    checklist: OnceLock<Vec<ChecklistVerdict>>,
}

fn cached<T>(cell: &OnceLock<T>, build: impl FnOnce() -> Result<T, CriteriaError>) -> Result<&T, CriteriaError> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = build()?;
    Ok(cell.get_or_init(|| v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmSummaryG {
    pub verdict: CmVerdict,
    pub justification: String,
    pub valabrega_valla: ValabregaValla,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmSummaryF {
    pub verdict: CmVerdict,
    pub justification: String,
    pub cortadellas_zarzuela: CzVerdict,
    pub fiber_test: FiberCmTest,
}

impl Analysis {
    pub fn new(blowup: Blowup, cap: u32, nmax: Option<u32>) -> Self {
        Analysis {
            blowup,
            cap,
            nmax,
            reduction: OnceLock::new(),
            minimal: OnceLock::new(),
            tables: Default::default(),
            series_g: OnceLock::new(),
            series_f: OnceLock::new(),
            fiber: OnceLock::new(),
            depth_g: OnceLock::new(),
            depth_f: OnceLock::new(),
            checklist: OnceLock::new(),
        }
    }

    pub fn reduction(&self) -> Result<ReductionData, CriteriaError> {
        cached(&self.reduction, || Ok(reduction_data(&self.blowup, self.cap)?)).copied()
    }

    pub fn minimal(&self) -> Result<bool, CriteriaError> {
        cached(&self.minimal, || Ok(minimal_reduction_check(&self.blowup)?)).copied()
    }

    /// Window for regularity checks: the configured one or `r + d + 2`.
    pub fn nmax(&self) -> Result<u32, CriteriaError> {
        match self.nmax {
            Some(n) => Ok(n),
            None => Ok(default_window(&self.blowup, &self.reduction()?)),
        }
    }

    pub fn table(&self, family: Family) -> Result<&LengthTable, CriteriaError> {
        let idx = Family::ALL.iter().position(|&f| f == family).unwrap();
        let red = self.reduction()?;
        cached(&self.tables[idx], || Ok(length_sum(family, &self.blowup, &red)?))
    }

    pub fn series_g(&self) -> Result<&HilbertSeries, CriteriaError> {
        let red = self.reduction()?;
        cached(&self.series_g, || Ok(hilbert_series_g(&self.blowup, &red)?))
    }

    pub fn series_f(&self) -> Result<&HilbertSeries, CriteriaError> {
        let red = self.reduction()?;
        cached(&self.series_f, || Ok(hilbert_series_f(&self.blowup, &red)?))
    }

    pub fn valabrega_valla(&self) -> Result<ValabregaValla, CriteriaError> {
        Ok(check_valabrega_valla(self.table(Family::VV)?))
    }

    pub fn cortadellas_zarzuela(&self) -> Result<CzVerdict, CriteriaError> {
        Ok(check_cortadellas_zarzuela(&self.valabrega_valla()?, self.table(Family::FC1)?))
    }

    pub fn fiber_test(&self) -> Result<&FiberCmTest, CriteriaError> {
        let red = self.reduction()?;
        let f = self.series_f()?;
        cached(&self.fiber, || cm_test_fiber(&self.blowup, &red, f))
    }

    pub fn cm_g(&self) -> Result<CmSummaryG, CriteriaError> {
        let vv = self.valabrega_valla()?;
        let (verdict, justification) = match (self.minimal()?, vv.holds) {
            (true, true) => (CmVerdict::Cm, "I^n ∩ J = J I^{n-1} for all n"),
            (true, false) => (CmVerdict::NotCm, "I^n ∩ J != J I^{n-1} for some n"),
            (false, _) => (CmVerdict::Unknown, "J is not a minimal reduction"),
        };
        Ok(CmSummaryG { verdict, justification: justification.into(), valabrega_valla: vv })
    }

    pub fn cm_f(&self) -> Result<CmSummaryF, CriteriaError> {
        let test = self.fiber_test()?.clone();
        let cz = self.cortadellas_zarzuela()?;
        let (verdict, justification) = if !self.minimal()? {
            (CmVerdict::Unknown, "J is not a minimal reduction".to_string())
        } else if test.verdict == CmVerdict::Cm {
            (CmVerdict::Cm, format!("e0(F) = {} = sum of fiber quotient lengths", test.e0))
        } else {
            (CmVerdict::NotCm, format!("e0(F) = {} != {} = sum of fiber quotient lengths", test.e0, test.sum))
        };
        Ok(CmSummaryF { verdict, justification, cortadellas_zarzuela: cz, fiber_test: test })
    }

    pub fn depth(&self, target: Target) -> Result<&DepthCertificate, CriteriaError> {
        let nmax = self.nmax()?;
        match target {
            Target::G => {
                let cm = self.cm_g()?;
                cached(&self.depth_g, || {
                    let mut cert = depth_lower_bound(Target::G, &self.blowup, nmax)?;
                    if cm.verdict != CmVerdict::Unknown {
                        cert.set_verdict(cm.verdict, format!("valabrega-valla: {}", cm.justification));
                    }
                    Ok(cert)
                })
            }
            Target::F => {
                let cm = self.cm_f()?;
                cached(&self.depth_f, || {
                    let mut cert = depth_lower_bound(Target::F, &self.blowup, nmax)?;
                    if cm.verdict != CmVerdict::Unknown {
                        cert.set_verdict(cm.verdict, format!("fiber multiplicity test: {}", cm.justification));
                    }
                    Ok(cert)
                })
            }
        }
    }

    pub fn checklist(&self) -> Result<&[ChecklistVerdict], CriteriaError> {
        let inputs = ChecklistInputs {
            reduction: self.reduction()?,
            lambda_hm: self.table(Family::LambdaHM)?,
            fc1: self.table(Family::FC1)?,
            fc2: self.table(Family::FC2)?,
            depth_g: self.depth(Target::G)?,
            depth_f: self.depth(Target::F)?,
        };
        cached(&self.checklist, || theorem_checklist(&self.blowup, &inputs)).map(|v| v.as_slice())
    }
}
