//! HTTP/JSON service over the mapping pipeline.
//!
//! Endpoints (all request/response bodies are JSON, types in
//! `shuttlemap_core::api`):
//!
//! | method | path            | operation                                  |
//! |--------|-----------------|--------------------------------------------|
//! | GET    | `/health`       | liveness probe                             |
//! | POST   | `/v1/parse`     | parse a circuit, return its statistics     |
//! | POST   | `/v1/map`       | weights + placement for one circuit        |
//! | POST   | `/v1/sim`       | full pipeline incl. shuttle simulation     |
//! | POST   | `/v1/bench/gen` | generate a benchmark suite + manifest      |
//! | POST   | `/v1/bench/run` | policy comparison over uploaded circuits   |
//!
//! The service is stateless per request; a config file only supplies
//! defaults that requests may override.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use tokio::net::TcpListener;

use shuttlemap_core::analysis::circuit_stats;
use shuttlemap_core::api::{
    BenchGenRequest, BenchGenResponse, BenchRunRequest, EdgeWeight, ErrorResponse, HealthResponse,
    MapRequest, MapResponse, NamedCircuitText, ParseRequest, ParseResponse, SimRequest,
    SimResponse,
};
use shuttlemap_core::benchgen::build_suite;
use shuttlemap_core::config::FileConfig;
use shuttlemap_core::error::Error as CoreError;
use shuttlemap_core::harness::{run_compare, CircuitInput, RunConfig};
use shuttlemap_core::placement::place;
use shuttlemap_core::report::BenchReport;
use shuttlemap_core::sim::{simulate, ShuttleTrace, SimOptions};
use shuttlemap_core::weighting::interaction_graph;

pub struct AppState {
    pub defaults: FileConfig,
}

impl AppState {
    pub fn new(defaults: FileConfig) -> Arc<Self> {
        Arc::new(AppState { defaults })
    }
}

pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl From<CoreError> for ApiError {
    fn from(err: CoreError) -> Self {
        let status = match err {
            CoreError::Io(_) | CoreError::Json(_) => StatusCode::INTERNAL_SERVER_ERROR,
            // bad request parameters vs. a circuit the pipeline cannot handle
            CoreError::InvalidPolicy(_)
            | CoreError::InvalidTopology(_)
            | CoreError::Config(_)
            | CoreError::Suite(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError { status, message: err.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorResponse { error: self.message })).into_response()
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/v1/parse", post(parse))
        .route("/v1/map", post(map))
        .route("/v1/sim", post(sim))
        .route("/v1/bench/gen", post(bench_gen))
        .route("/v1/bench/run", post(bench_run))
        .with_state(state)
}

/// Bind and serve until the task is dropped; returns the bound address.
pub async fn spawn(state: Arc<AppState>, addr: SocketAddr) -> anyhow::Result<(SocketAddr, tokio::task::JoinHandle<()>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let app = router(state);
    let handle = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, app).await {
            tracing::error!("server error: {e}");
        }
    });
    Ok((local, handle))
}

pub async fn serve(state: Arc<AppState>, addr: SocketAddr) -> anyhow::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}

async fn health() -> Json<HealthResponse> {
    Json(HealthResponse {
        status: "ok".into(),
        service: "shuttlemap".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

async fn parse(
    State(_state): State<Arc<AppState>>,
    Json(req): Json<ParseRequest>,
) -> Result<Json<ParseResponse>, ApiError> {
    let circuit = req.circuit.parse("circuit")?;
    let stats = circuit_stats(&circuit);
    Ok(Json(ParseResponse {
        name: circuit.name.clone(),
        qubits: circuit.num_qubits,
        total_gates: circuit.gates.len() as u32,
        two_qubit_gates: stats.g,
        stats,
    }))
}

async fn map(
    State(state): State<Arc<AppState>>,
    Json(req): Json<MapRequest>,
) -> Result<Json<MapResponse>, ApiError> {
    let circuit = req.circuit.parse("circuit")?;
    let stats = circuit_stats(&circuit);
    let policy = match &req.policy {
        Some(spec) => spec.to_policy()?,
        None => state.defaults.policy.default_policy()?,
    };
    let topo = match &req.topology {
        Some(section) => section.resolve()?,
        None => state.defaults.topology.resolve()?,
    };

    let start = Instant::now();
    let graph = interaction_graph(&circuit, &policy, &stats)?;
    let mapping = place(&graph, &topo)?;
    let compile_time_s = start.elapsed().as_secs_f64();

    let weights = graph
        .sorted_edges()
        .into_iter()
        .map(|(pair, weight)| EdgeWeight { a: pair.a(), b: pair.b(), weight })
        .collect();
    Ok(Json(MapResponse {
        name: circuit.name,
        policy: policy.label(),
        stats,
        weights,
        mapping: mapping.to_vecs(),
        compile_time_s,
    }))
}

async fn sim(
    State(state): State<Arc<AppState>>,
    Json(req): Json<SimRequest>,
) -> Result<Json<SimResponse>, ApiError> {
    let circuit = req.circuit.parse("circuit")?;
    let stats = circuit_stats(&circuit);
    let policy = match &req.policy {
        Some(spec) => spec.to_policy()?,
        None => state.defaults.policy.default_policy()?,
    };
    let topo = match &req.topology {
        Some(section) => section.resolve()?,
        None => state.defaults.topology.resolve()?,
    };
    let fidelity = req.fidelity.unwrap_or(state.defaults.fidelity);
    let opts = SimOptions {
        lookahead: req.lookahead.unwrap_or(state.defaults.sim.lookahead),
    };

    let graph = interaction_graph(&circuit, &policy, &stats)?;
    let mapping = place(&graph, &topo)?;
    let mut result = simulate(&circuit, &mapping, &topo, &fidelity, &opts)?;
    if !req.include_trace {
        result.trace = ShuttleTrace::default();
    }
    Ok(Json(SimResponse {
        name: circuit.name,
        policy: policy.label(),
        stats,
        mapping: mapping.to_vecs(),
        result,
    }))
}

async fn bench_gen(
    State(_state): State<Arc<AppState>>,
    Json(req): Json<BenchGenRequest>,
) -> Result<Json<BenchGenResponse>, ApiError> {
    let manifest = build_suite(&req.suite, req.seed, req.count)?;
    let circuits = manifest
        .generate_all()?
        .iter()
        .map(|c| NamedCircuitText { name: c.name.clone(), text: c.to_ms_text() })
        .collect();
    Ok(Json(BenchGenResponse { manifest, circuits }))
}

async fn bench_run(
    State(state): State<Arc<AppState>>,
    Json(req): Json<BenchRunRequest>,
) -> Result<Json<BenchReport>, ApiError> {
    let mut cfg: RunConfig = req.run_config()?;
    if req.topology.is_none() {
        cfg.topology = state.defaults.topology.resolve()?;
    }
    if req.fidelity.is_none() {
        cfg.fidelity = state.defaults.fidelity;
    }
    if req.lookahead.is_none() {
        cfg.sim = state.defaults.sim;
    }
    if req.policies.is_none() {
        cfg.policies = state.defaults.bench_policies()?;
    }
    if req.baseline.is_none() {
        cfg.baseline = state.defaults.bench_baseline()?;
    }

    let mut inputs = Vec::with_capacity(req.circuits.len());
    for (i, payload) in req.circuits.iter().enumerate() {
        let circuit = payload.parse(&format!("circuit_{i:03}"))?;
        inputs.push(CircuitInput { name: circuit.name.clone(), circuit });
    }

    // the comparison fans out on the rayon pool; keep it off the async workers
    let report =
        tokio::task::spawn_blocking(move || run_compare(&cfg, &inputs))
            .await
            .map_err(|e| ApiError {
                status: StatusCode::INTERNAL_SERVER_ERROR,
                message: format!("bench run task failed: {e}"),
            })??;
    Ok(Json(report))
}
