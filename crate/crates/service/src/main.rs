use std::net::SocketAddr;
use std::path::PathBuf;

use chordtone_service::{router, AppState};
use clap::Parser;
use tower_http::trace::TraceLayer;
use tracing_subscriber::EnvFilter;

/// HTTP server for chord-tone line generation and shape feedback.
#[derive(Debug, Parser)]
#[command(name = "chordtone-server", version)]
struct Args {
    #[arg(long, env = "CHORDTONE_LISTEN", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,

    /// Like/dislike counters; created on first feedback if missing.
    #[arg(long, env = "CHORDTONE_PREFS", default_value = "prefs.json")]
    prefs_file: PathBuf,

    /// Directory served for any path outside /api.
    #[arg(long, env = "CHORDTONE_STATIC")]
    static_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let args = Args::parse();

    let state = AppState::with_prefs_file(&args.prefs_file)?;
    let app = router(state, args.static_dir).layer(TraceLayer::new_for_http());
    let listener = tokio::net::TcpListener::bind(args.listen).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
