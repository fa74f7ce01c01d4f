//! Typed client for the shuttlemap HTTP service.

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use shuttlemap_core::api::{
    BenchGenRequest, BenchGenResponse, BenchRunRequest, ErrorResponse, HealthResponse, MapRequest,
    MapResponse, ParseRequest, ParseResponse, SimRequest, SimResponse,
};
use shuttlemap_core::report::BenchReport;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport error: {0}")]
    Transport(#[from] reqwest::Error),

    /// The service rejected the request.
    #[error("service error ({status}): {message}")]
    Api { status: u16, message: String },
}

pub type ClientResult<T> = Result<T, ClientError>;

#[derive(Clone)]
pub struct ShuttlemapClient {
    base_url: String,
    http: reqwest::Client,
}

impl ShuttlemapClient {
    pub fn new(base_url: impl Into<String>) -> Self {
        let mut base_url = base_url.into();
        while base_url.ends_with('/') {
            base_url.pop();
        }
        ShuttlemapClient { base_url, http: reqwest::Client::new() }
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    async fn decode<T: DeserializeOwned>(response: reqwest::Response) -> ClientResult<T> {
        let status = response.status();
        if status.is_success() {
            Ok(response.json().await?)
        } else {
            let message = match response.json::<ErrorResponse>().await {
                Ok(body) => body.error,
                Err(_) => status.canonical_reason().unwrap_or("unknown error").to_string(),
            };
            Err(ClientError::Api { status: status.as_u16(), message })
        }
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> ClientResult<T> {
        let response = self
            .http
            .post(format!("{}{path}", self.base_url))
            .json(body)
            .send()
            .await?;
        Self::decode(response).await
    }

    pub async fn health(&self) -> ClientResult<HealthResponse> {
        let response = self.http.get(format!("{}/health", self.base_url)).send().await?;
        Self::decode(response).await
    }

    pub async fn parse(&self, req: &ParseRequest) -> ClientResult<ParseResponse> {
        self.post("/v1/parse", req).await
    }

    pub async fn map(&self, req: &MapRequest) -> ClientResult<MapResponse> {
        self.post("/v1/map", req).await
    }

    pub async fn sim(&self, req: &SimRequest) -> ClientResult<SimResponse> {
        self.post("/v1/sim", req).await
    }

    pub async fn bench_gen(&self, req: &BenchGenRequest) -> ClientResult<BenchGenResponse> {
        self.post("/v1/bench/gen", req).await
    }

    pub async fn bench_run(&self, req: &BenchRunRequest) -> ClientResult<BenchReport> {
        self.post("/v1/bench/run", req).await
    }
}
