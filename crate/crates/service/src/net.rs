//! Length-delimited JSON over TCP: each frame is a 4-byte big-endian length
//! followed by that many bytes of UTF-8 JSON.

use std::io::{self, ErrorKind, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use serde_json::Value;

use crate::protocol::{ErrorCode, Reply, Request};
use crate::service::CritiqueService;

pub const DEFAULT_PORT: u16 = 7341;
pub const MAX_FRAME: usize = 16 * 1024 * 1024;
const POLL: Duration = Duration::from_millis(50);

pub fn write_frame(w: &mut impl Write, payload: &[u8]) -> io::Result<()> {
    let len = u32::try_from(payload.len())
        .ok()
        .filter(|n| *n as usize <= MAX_FRAME)
        .ok_or_else(|| io::Error::new(ErrorKind::InvalidInput, "frame too large"))?;
    w.write_all(&len.to_be_bytes())?;
    w.write_all(payload)?;
    w.flush()
}

/// `Ok(None)` on a clean end of stream between frames.
pub fn read_frame(r: &mut impl Read) -> io::Result<Option<Vec<u8>>> {
    let mut len = [0u8; 4];
    match r.read_exact(&mut len) {
        Ok(()) => {}
        Err(e) if e.kind() == ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e),
    }
    let len = u32::from_be_bytes(len) as usize;
    if len > MAX_FRAME {
        return Err(io::Error::new(ErrorKind::InvalidData, "frame too large"));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    Ok(Some(buf))
}

pub struct Server {
    listener: TcpListener,
}

impl Server {
    pub fn bind(addr: impl ToSocketAddrs) -> io::Result<Server> {
        let listener = TcpListener::bind(addr)?;
        listener.set_nonblocking(true)?;
        Ok(Server { listener })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Serves until `shutdown` is set. A ticker thread fires debounced
    /// recomputes; each connection gets its own thread.
    pub fn run(self, service: Arc<CritiqueService>, shutdown: Arc<AtomicBool>) -> io::Result<()> {
        let ticker = {
            let service = Arc::clone(&service);
            let shutdown = Arc::clone(&shutdown);
            thread::spawn(move || {
                while !shutdown.load(Ordering::SeqCst) {
                    let ran = service.tick();
                    if ran > 0 {
                        log::debug!("recomputed {ran} session(s)");
                    }
                    thread::sleep(POLL);
                }
            })
        };
        while !shutdown.load(Ordering::SeqCst) {
            match self.listener.accept() {
                Ok((stream, peer)) => {
                    log::info!("connection from {peer}");
                    let service = Arc::clone(&service);
                    let shutdown = Arc::clone(&shutdown);
                    thread::spawn(move || {
                        if let Err(e) = serve_connection(stream, &service, &shutdown) {
                            log::warn!("connection {peer} closed: {e}");
                        }
                    });
                }
                Err(e) if e.kind() == ErrorKind::WouldBlock => thread::sleep(POLL),
                Err(e) => return Err(e),
            }
        }
        let _ = ticker.join();
        Ok(())
    }
}

fn serve_connection(
    mut stream: TcpStream,
    service: &CritiqueService,
    shutdown: &AtomicBool,
) -> io::Result<()> {
    stream.set_nonblocking(false)?;
    stream.set_read_timeout(Some(Duration::from_millis(250)))?;
    stream.set_nodelay(true)?;
    loop {
        if shutdown.load(Ordering::SeqCst) {
            return Ok(());
        }
        let frame = match read_frame(&mut stream) {
            Ok(Some(f)) => f,
            Ok(None) => return Ok(()),
            // idle connection: check the shutdown flag and keep waiting
            Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => continue,
            Err(e) if e.kind() == ErrorKind::InvalidData => {
                let reply = Reply::error(ErrorCode::BadRequest, e.to_string());
                write_frame(&mut stream, reply.to_json().as_bytes())?;
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let reply = service.handle_bytes(&frame);
        write_frame(&mut stream, reply.to_json().as_bytes())?;
    }
}

/// Blocking request/reply client.
pub struct Client {
    stream: TcpStream,
}

impl Client {
    pub fn connect(addr: impl ToSocketAddrs) -> io::Result<Client> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(Client { stream })
    }

    pub fn send_raw(&mut self, payload: &[u8]) -> io::Result<Value> {
        write_frame(&mut self.stream, payload)?;
        let frame = read_frame(&mut self.stream)?.ok_or_else(|| {
            io::Error::new(ErrorKind::UnexpectedEof, "server closed the connection")
        })?;
        serde_json::from_slice(&frame).map_err(|e| io::Error::new(ErrorKind::InvalidData, e))
    }

    pub fn request(&mut self, req: &Request) -> io::Result<Value> {
        self.send_raw(req.to_json().as_bytes())
    }
}
