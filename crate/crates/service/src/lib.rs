//! JSON-over-HTTP front end plus the durable like/dislike store.
//!
//! | route              | body                                   |
//! |--------------------|----------------------------------------|
//! | `POST /api/generate` | [`GenerateRequest`] -> [`GenerateResponse`] |
//! | `POST /api/feedback` | [`FeedbackRequest`] -> [`FeedbackResponse`] |
//! | `GET /api/health`    | `{"status": "ok", "formatVersion": 1}`  |
//!
//! Anything else falls through to the static asset directory when one is
//! configured.

use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chordtone::error::{Error as EngineError, GenerationError, ParseError};
use chordtone::music::parse_progression;
use chordtone::{
    generate, ChosenShape, DistanceConfig, Fingerprint, GenerateOptions, LineDocument, PreferenceStore,
    StretchConfig, Verdict, WeightConfig, FORMAT_VERSION,
};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

/// Shared preference state. Writers hold the lock across the file write so
/// updates are serialized; readers clone a snapshot under the same lock.
#[derive(Clone)]
pub struct AppState {
    prefs: Arc<Mutex<PreferenceStore>>,
    prefs_path: Option<Arc<PathBuf>>,
}

impl AppState {
    /// Loads (or starts empty at) the preference file; every update is
    /// written through to it.
    pub fn with_prefs_file(path: impl Into<PathBuf>) -> io::Result<Self> {
        let path = path.into();
        let store = PreferenceStore::load_or_default(&path)?;
        Ok(AppState { prefs: Arc::new(Mutex::new(store)), prefs_path: Some(Arc::new(path)) })
    }

    /// Preferences kept in memory only.
    pub fn in_memory() -> Self {
        AppState { prefs: Arc::new(Mutex::new(PreferenceStore::new())), prefs_path: None }
    }

    pub fn snapshot(&self) -> PreferenceStore {
        self.prefs.lock().clone()
    }

    pub fn prefs_path(&self) -> Option<&Path> {
        self.prefs_path.as_deref().map(PathBuf::as_path)
    }

    fn record(&self, fingerprint: Fingerprint, verdict: Verdict) -> io::Result<chordtone::Votes> {
        let mut guard = self.prefs.lock();
        let mut next = guard.clone();
        let votes = next.record(fingerprint, verdict);
        if let Some(path) = &self.prefs_path {
            next.save(path)?;
        }
        *guard = next;
        Ok(votes)
    }
}

pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/generate", post(generate_handler))
        .route("/api/feedback", post(feedback_handler))
        .route("/api/health", get(health_handler))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coeffs {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

fn default_npm() -> usize {
    4
}

fn default_stretch() -> u8 {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GenerateRequest {
    pub progression: String,
    #[serde(default = "default_npm")]
    pub npm: usize,
    #[serde(default = "default_stretch")]
    pub stretch: u8,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub randomize_start: Option<bool>,
    #[serde(default)]
    pub coeffs: Option<Coeffs>,
    #[serde(default)]
    pub penalty: Option<f64>,
    #[serde(default)]
    pub preference_unit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenerateResponse {
    pub tab: String,
    pub notes: LineDocument,
    pub shapes: Vec<ChosenShape>,
    pub total_cost: f64,
    pub seed_used: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackRequest {
    pub fingerprint: Fingerprint,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeedbackResponse {
    pub fingerprint: Fingerprint,
    pub likes: u64,
    pub dislikes: u64,
}

/// Error body: `{"error": kind, "message": text, "field": path?, "chordIndex": k?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chord_index: Option<usize>,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: impl Into<String>) -> Self {
        ApiError { status: status.as_u16(), error: error.into(), message: message.into(), field: None, chord_index: None }
    }

    fn field(mut self, field: impl Into<String>) -> Self {
        self.field = Some(field.into());
        self
    }

    fn bad_body(rejection: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "InvalidBody", rejection.body_text())
    }

    fn from_parse(err: &ParseError) -> Self {
        let kind = |e: &ParseError| match e {
            ParseError::EmptyInput => "EmptyInput",
            ParseError::UnknownRoot(_) => "UnknownRoot",
            ParseError::UnknownQuality(_) => "UnknownQuality",
            ParseError::EmptyProgression => "EmptyProgression",
            ParseError::Token { .. } => "InvalidChord",
        };
        match err {
            ParseError::Token { index, source, .. } => {
                let mut e = ApiError::new(StatusCode::BAD_REQUEST, kind(source), err.to_string())
                    .field(format!("progression[{index}]"));
                e.chord_index = Some(*index);
                e
            }
            other => ApiError::new(StatusCode::BAD_REQUEST, kind(other), other.to_string()).field("progression"),
        }
    }

    fn from_generation(err: &GenerationError) -> Self {
        let status = StatusCode::UNPROCESSABLE_ENTITY;
        match err {
            GenerationError::EmptyLayer { chord_index, .. } => {
                let mut e = ApiError::new(status, "EmptyLayer", err.to_string()).field(format!("progression[{chord_index}]"));
                e.chord_index = Some(*chord_index);
                e
            }
            GenerationError::PatternTooShort { .. } => ApiError::new(status, "PatternTooShort", err.to_string()).field("npm"),
            GenerationError::NoShapes { .. } => ApiError::new(status, "NoShapes", err.to_string()),
            GenerationError::InvalidConfig(_) => ApiError::new(StatusCode::BAD_REQUEST, "InvalidConfig", err.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

fn non_negative(value: Option<f64>, default: f64, field: &str) -> Result<f64, ApiError> {
    let value = value.unwrap_or(default);
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ApiError::new(StatusCode::BAD_REQUEST, "InvalidConfig", format!("{field} must be a non-negative number"))
            .field(field))
    }
}

impl GenerateRequest {
    fn options(&self) -> Result<GenerateOptions, ApiError> {
        let coeffs = self.coeffs.unwrap_or(Coeffs { a: 1.0, b: 0.0, c: 0.0 });
        let weights = WeightConfig {
            distance: DistanceConfig { string_change_penalty: non_negative(self.penalty, 2.0, "penalty")? },
            coeff_transition: non_negative(Some(coeffs.a), 1.0, "coeffs.a")?,
            coeff_hand_move: non_negative(Some(coeffs.b), 0.0, "coeffs.b")?,
            coeff_preference: non_negative(Some(coeffs.c), 0.0, "coeffs.c")?,
            preference_unit: non_negative(self.preference_unit, 1.0, "preferenceUnit")?,
        };
        Ok(GenerateOptions {
            npm: self.npm,
            stretch: StretchConfig { max_stretch: self.stretch },
            weights,
            randomize_start: self.randomize_start.unwrap_or(false),
            seed: self.seed.unwrap_or_else(rand::random),
        })
    }
}

/// Runs the pipeline for one request against a preference snapshot.
pub fn run_generate(request: &GenerateRequest, prefs: &PreferenceStore) -> Result<GenerateResponse, ApiError> {
    let options = request.options()?;
    let progression = parse_progression(&request.progression).map_err(|e| ApiError::from_parse(&e))?;
    let generation = generate(&progression, &options, prefs).map_err(|e| match e {
        EngineError::Parse(e) => ApiError::from_parse(&e),
        EngineError::Generation(e) => ApiError::from_generation(&e),
        EngineError::Path(e) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()),
    })?;
    Ok(GenerateResponse {
        tab: generation.tab.to_string(),
        notes: generation.document(),
        total_cost: generation.path.total_cost,
        shapes: generation.shapes,
        seed_used: options.seed,
    })
}

async fn generate_handler(
    State(state): State<AppState>,
    body: Result<Json<GenerateRequest>, JsonRejection>,
) -> Result<Json<GenerateResponse>, ApiError> {
    let Json(request) = body.map_err(ApiError::bad_body)?;
    let snapshot = state.snapshot();
    let response = tokio::task::spawn_blocking(move || run_generate(&request, &snapshot))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))??;
    Ok(Json(response))
}

async fn feedback_handler(
    State(state): State<AppState>,
    body: Result<Json<FeedbackRequest>, JsonRejection>,
) -> Result<Json<FeedbackResponse>, ApiError> {
    let Json(request) = body.map_err(ApiError::bad_body)?;
    let fingerprint = request.fingerprint.clone();
    let votes = tokio::task::spawn_blocking(move || state.record(request.fingerprint, request.verdict))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?
        .map_err(|e| {
            tracing::error!("writing preference file: {e}");
            ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", format!("writing preference file: {e}"))
        })?;
    Ok(Json(FeedbackResponse { fingerprint, likes: votes.likes, dislikes: votes.dislikes }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Health {
    pub status: String,
    pub format_version: u32,
}

async fn health_handler() -> Json<Health> {
    Json(Health { status: "ok".into(), format_version: FORMAT_VERSION })
}
