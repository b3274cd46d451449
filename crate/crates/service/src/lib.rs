//! HTTP service and CLI for GDPR rights requests.
//!
//! The store is event-sourced: `data/journal.log` is the source of truth
//! and the Turtle files under `data/records`, `data/notices` and
//! `data/policies` are caches rebuilt on startup.

pub mod api;
pub mod cli;
pub mod clock;
pub mod config;
pub mod journal;
pub mod store;

use std::io::Write;
use std::sync::{Arc, RwLock};

use anyhow::Context;

use crate::config::ServiceConfig;
use crate::store::Store;

/// Open the store, bind, print `listening on <addr>` and serve until
/// interrupted.
pub async fn serve(config: ServiceConfig) -> anyhow::Result<()> {
    let store = Store::open(&config)?;
    let listener = tokio::net::TcpListener::bind(&config.listen_address)
        .await
        .with_context(|| format!("binding {}", config.listen_address))?;
    let addr = listener.local_addr()?;
    tracing::info!(%addr, data = %config.data_directory.display(), "serving");
    {
        let mut out = std::io::stdout().lock();
        writeln!(out, "listening on {addr}")?;
        out.flush()?;
    }
    let app = api::router(Arc::new(RwLock::new(store)));
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
