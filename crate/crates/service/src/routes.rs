use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tstrace_core::hdr::{hdr_interval, TimedBand, DEFAULT_EPS, DEFAULT_RHO};
use tstrace_core::xai::{barcode, clamp_range, snapshot_at, BarcodeStroke, SnapshotView};
use tstrace_core::{RunMeta, RunTrace, StepRecord};

use crate::error::ApiError;
use crate::store::TraceStore;

type Shared = Arc<TraceStore>;
type Params = Query<HashMap<String, String>>;

/// A slice of a run's steps, optionally restricted to a subset of arms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepsPage {
    pub run_id: String,
    pub from: usize,
    pub to: usize,
    /// Arm index of each entry in `steps[i].arms`; `None` means all arms in order.
    pub arms: Option<Vec<usize>>,
    pub steps: Vec<StepRecord>,
}

pub fn api_routes() -> Router<Shared> {
    Router::new()
        .route("/api/runs", get(list_runs))
        .route("/api/runs/{id}/steps", get(steps))
        .route("/api/runs/{id}/snapshot/{t}", get(snapshot))
        .route("/api/runs/{id}/hdr", get(hdr))
        .route("/api/runs/{id}/barcode", get(barcode_strokes))
}

async fn with_store<T, F>(store: Shared, f: F) -> Result<T, ApiError>
where
    F: FnOnce(&TraceStore) -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(move || f(&store))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

fn find(store: &TraceStore, id: &str) -> Result<Arc<RunTrace>, ApiError> {
    store.get(id).ok_or_else(|| ApiError::NotFound(format!("unknown run {id:?}")))
}

fn parse<T: std::str::FromStr>(params: &HashMap<String, String>, key: &str) -> Result<Option<T>, ApiError> {
    params
        .get(key)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse().map_err(|_| ApiError::BadRequest(format!("invalid {key}: {v:?}"))))
        .transpose()
}

fn rho(params: &HashMap<String, String>) -> Result<f64, ApiError> {
    let rho = parse(params, "rho")?.unwrap_or(DEFAULT_RHO);
    if rho > 0.0 && rho < 1.0 {
        Ok(rho)
    } else {
        Err(ApiError::BadRequest(format!("rho must lie in (0, 1), got {rho}")))
    }
}

fn range(params: &HashMap<String, String>, trace: &RunTrace) -> Result<Range<usize>, ApiError> {
    let from = parse(params, "from")?.unwrap_or(0);
    let to = parse(params, "to")?.unwrap_or(trace.len());
    if from > to {
        return Err(ApiError::BadRequest(format!("inverted range from={from} to={to}")));
    }
    Ok(clamp_range(trace, Some(from..to))?)
}

fn arm_list(params: &HashMap<String, String>, trace: &RunTrace) -> Result<Option<Vec<usize>>, ApiError> {
    let Some(raw) = params.get("arms").filter(|v| !v.is_empty()) else {
        return Ok(None);
    };
    let mut arms = raw
        .split(',')
        .map(|s| {
            let arm: usize = s.trim().parse().map_err(|_| ApiError::BadRequest(format!("invalid arm {s:?}")))?;
            if arm < trace.num_arms() {
                Ok(arm)
            } else {
                Err(ApiError::BadRequest(format!("arm {arm} out of range for {} arms", trace.num_arms())))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    arms.sort_unstable();
    arms.dedup();
    Ok(Some(arms))
}

async fn list_runs(State(store): State<Shared>) -> Result<Json<Vec<RunMeta>>, ApiError> {
    with_store(store, |s| Ok(Json(s.list()))).await
}

async fn steps(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Query(params): Params,
) -> Result<Json<StepsPage>, ApiError> {
    with_store(store, move |s| {
        let trace = find(s, &id)?;
        let range = range(&params, &trace)?;
        let arms = arm_list(&params, &trace)?;
        let steps = trace.steps[range.clone()]
            .iter()
            .map(|rec| match &arms {
                None => rec.clone(),
                Some(keep) => StepRecord { arms: keep.iter().map(|&k| rec.arms[k]).collect(), ..rec.clone() },
            })
            .collect();
        Ok(Json(StepsPage { run_id: id, from: range.start, to: range.end, arms, steps }))
    })
    .await
}

async fn snapshot(
    State(store): State<Shared>,
    Path((id, t)): Path<(String, String)>,
    Query(params): Params,
) -> Result<Json<SnapshotView>, ApiError> {
    with_store(store, move |s| {
        let trace = find(s, &id)?;
        let t: usize = t.parse().map_err(|_| ApiError::BadRequest(format!("invalid step {t:?}")))?;
        if t >= trace.len() {
            return Err(ApiError::BadRequest(format!("step {t} out of range for {} steps", trace.len())));
        }
        Ok(Json(snapshot_at(&trace, t, rho(&params)?)?))
    })
    .await
}

async fn hdr(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Query(params): Params,
) -> Result<Json<Vec<TimedBand>>, ApiError> {
    with_store(store, move |s| {
        let trace = find(s, &id)?;
        let arm: usize = parse(&params, "arm")?.ok_or_else(|| ApiError::BadRequest("missing arm".into()))?;
        if arm >= trace.num_arms() {
            return Err(ApiError::BadRequest(format!("arm {arm} out of range for {} arms", trace.num_arms())));
        }
        let rho = rho(&params)?;
        let range = range(&params, &trace)?;
        let bands = trace.steps[range]
            .iter()
            .map(|rec| {
                let state = rec.arms[arm];
                Ok(TimedBand { t: rec.t, band: hdr_interval(state.alpha, state.beta, rho, DEFAULT_EPS)? })
            })
            .collect::<Result<Vec<_>, ApiError>>()?;
        Ok(Json(bands))
    })
    .await
}

async fn barcode_strokes(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Query(params): Params,
) -> Result<Json<Vec<BarcodeStroke>>, ApiError> {
    with_store(store, move |s| {
        let trace = find(s, &id)?;
        let range = range(&params, &trace)?;
        let arms = arm_list(&params, &trace)?;
        Ok(Json(barcode(&trace, arms.as_deref(), Some(range))?))
    })
    .await
}
