use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use mailmood_core::tracking::{Demographics, PersonalIndex};
use mailmood_dashboard::{bind, run, AppState};

use crate::config::Config;
use crate::mailbox::load;

pub fn serve(
    cfg: &Config,
    mbox: &Path,
    me: &str,
    static_dir: Option<PathBuf>,
    demographics: Demographics,
) -> Result<()> {
    let lex = cfg.lexicon()?;
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .context("starting runtime")?;
    let messages = load(mbox)?;
    let me = me.to_string();
    rt.block_on(async move {
        let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, cfg.port));
        let listener = bind(addr).await?;
        println!("listening on http://{}", listener.local_addr()?);
        let state = AppState::new(demographics);
        run(listener, state, static_dir, move || PersonalIndex::build(&messages, &me, &lex))
        .await?;
        Ok(())
    })
}
