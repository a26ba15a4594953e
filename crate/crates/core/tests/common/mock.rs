//! A scripted HTTP server standing in for a step-prediction backend.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

#[derive(Clone, Debug)]
pub enum Reply {
    /// 200 with this body.
    Body(String),
    /// Sleep, then 200 with this body.
    Slow(Duration, String),
    /// Close the connection without answering.
    Hangup,
}

pub struct MockServer {
    pub url: String,
    /// Request bodies in arrival order.
    pub bodies: Arc<Mutex<Vec<String>>>,
}

fn read_body(stream: &mut TcpStream) -> Option<String> {
    let mut reader = BufReader::new(stream.try_clone().ok()?);
    let mut len = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).ok()? == 0 {
            return None;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((k, v)) = line.split_once(':') {
            if k.eq_ignore_ascii_case("content-length") {
                len = v.trim().parse().ok()?;
            }
        }
    }
    let mut body = vec![0; len];
    reader.read_exact(&mut body).ok()?;
    String::from_utf8(body).ok()
}

/// Serves `script(i)` to the i-th request, forever.
pub fn serve(script: impl Fn(usize) -> Reply + Send + Sync + 'static) -> MockServer {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let bodies = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&bodies);
    let script = Arc::new(script);
    thread::spawn(move || {
        for (i, stream) in listener.incoming().enumerate() {
            let Ok(mut stream) = stream else { continue };
            let log = Arc::clone(&log);
            let script = Arc::clone(&script);
            thread::spawn(move || {
                let Some(body) = read_body(&mut stream) else { return };
                log.lock().unwrap().push(body);
                let text = match script(i) {
                    Reply::Hangup => return,
                    Reply::Body(b) => b,
                    Reply::Slow(d, b) => {
                        thread::sleep(d);
                        b
                    }
                };
                let _ = write!(
                    stream,
                    "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{}",
                    text.len(),
                    text
                );
            });
        }
    });
    MockServer { url, bodies }
}
