use super::{DiagnosticSample, EvolutionRecord};
use crate::error::{Error, Result};
use crate::field::Frame;

/// Diagnostics closer than this many packet widths to a wall count as
/// "in contact".
const CONTACT_WIDTHS: f64 = 3.0;

/// One contact with the receding wall and the normalized energy `⟨H⟩/norm`
/// on the free plateaus either side of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionEvent {
    pub start: f64,
    pub end: f64,
    pub energy_before: f64,
    pub energy_after: f64,
}

impl ReflectionEvent {
    /// `E_after / E_before`.
    pub fn ratio(&self) -> f64 {
        self.energy_after / self.energy_before
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RedshiftMeasurement {
    pub events: Vec<ReflectionEvent>,
    /// Energy factor of the first reflection.
    pub ratio: f64,
    /// `(1 - ν)/(1 + ν)`, the receding-mirror factor.
    pub expected: f64,
}

impl RedshiftMeasurement {
    /// True when the measured energy went down.
    pub fn is_redshift(&self) -> bool {
        self.ratio < 1.0
    }

    pub fn relative_error(&self) -> f64 {
        (self.ratio / self.expected - 1.0).abs()
    }
}

fn near_right(d: &DiagnosticSample) -> bool {
    d.wall - d.centroid < CONTACT_WIDTHS * d.width
}

fn near_left(d: &DiagnosticSample) -> bool {
    d.centroid < CONTACT_WIDTHS * d.width
}

fn plateau_mean(samples: &[DiagnosticSample]) -> Option<f64> {
    let free: Vec<f64> = samples
        .iter()
        .filter(|d| !near_left(d) && !near_right(d))
        .map(|d| d.energy_per_norm())
        .collect();
    (!free.is_empty()).then(|| free.iter().sum::<f64>() / free.len() as f64)
}

/// Contacts with the receding wall found in a flat-frame record's
/// diagnostics, each with its before/after plateau energies. A contact at
/// the end of the record, without a plateau after it, is dropped.
pub fn reflection_events(rec: &EvolutionRecord) -> Result<Vec<ReflectionEvent>> {
    if rec.frame() != Frame::Flat {
        return Err(Error::GridMismatch("reflection events are measured on flat records".into()));
    }
    let d = rec.diagnostics();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < d.len() {
        if near_right(&d[i]) {
            let s = i;
            while i < d.len() && near_right(&d[i]) {
                i += 1;
            }
            spans.push((s, i));
        } else {
            i += 1;
        }
    }
    let mut events = Vec::new();
    for (k, &(s, e)) in spans.iter().enumerate() {
        let before_from = if k == 0 { 0 } else { spans[k - 1].1 };
        let after_to = spans.get(k + 1).map_or(d.len(), |n| n.0);
        let (Some(before), Some(after)) = (plateau_mean(&d[before_from..s]), plateau_mean(&d[e..after_to])) else {
            continue;
        };
        events.push(ReflectionEvent {
            start: d[s].time,
            end: d[e - 1].time,
            energy_before: before,
            energy_after: after,
        });
    }
    Ok(events)
}

/// Energy factor of the first reflection off the receding wall.
pub fn measure_redshift(rec: &EvolutionRecord) -> Result<RedshiftMeasurement> {
    let events = reflection_events(rec)?;
    let first = events
        .first()
        .ok_or_else(|| Error::NoReflection("no wall contact with free plateaus on both sides".into()))?;
    let nu = rec.nu();
    Ok(RedshiftMeasurement {
        ratio: first.ratio(),
        expected: (1.0 - nu) / (1.0 + nu),
        events,
    })
}
