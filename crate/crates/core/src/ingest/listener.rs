use std::io::ErrorKind;
use std::net::{SocketAddr, ToSocketAddrs, UdpSocket};
use std::time::Duration;

use super::datagram::{parse_datagram, Datagram, HEADER_LEN, MAX_PAYLOAD};
use super::IngestError;

/// Default UDP port of the capture card's raw data stream.
pub const DEFAULT_PORT: u16 = 4098;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ListenReport {
    pub received: usize,
    /// Datagrams that failed to parse; dropped.
    pub malformed: usize,
}

/// Best-effort UDP receiver for a capture session. No real-time guarantees.
#[derive(Debug)]
pub struct CaptureListener {
    socket: UdpSocket,
}

impl CaptureListener {
    pub fn bind(addr: impl ToSocketAddrs) -> Result<Self, IngestError> {
        Ok(Self { socket: UdpSocket::bind(addr)? })
    }

    /// Bind on all interfaces at `port` (0 picks a free port).
    pub fn bind_port(port: u16) -> Result<Self, IngestError> {
        Self::bind(("0.0.0.0", port))
    }

    pub fn local_addr(&self) -> Result<SocketAddr, IngestError> {
        Ok(self.socket.local_addr()?)
    }

    /// Receive until `max_datagrams` arrive or nothing arrives for `idle`.
    pub fn receive(&self, max_datagrams: usize, idle: Duration) -> Result<(Vec<Datagram>, ListenReport), IngestError> {
        self.socket.set_read_timeout(Some(idle))?;
        let mut buf = [0u8; HEADER_LEN + MAX_PAYLOAD + 1];
        let mut out = Vec::new();
        let mut report = ListenReport::default();
        while out.len() < max_datagrams {
            match self.socket.recv(&mut buf) {
                Ok(n) => match parse_datagram(&buf[..n]) {
                    Ok(d) => out.push(d),
                    Err(_) => report.malformed += 1,
                },
                Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => break,
                Err(e) => return Err(e.into()),
            }
        }
        report.received = out.len();
        Ok((out, report))
    }
}

/// Send datagrams to `target`, in order, from an ephemeral socket.
pub fn send_datagrams<'a, I>(target: impl ToSocketAddrs, datagrams: I) -> Result<usize, IngestError>
where
    I: IntoIterator<Item = &'a Datagram>,
{
    let target = target
        .to_socket_addrs()?
        .next()
        .ok_or_else(|| std::io::Error::new(ErrorKind::InvalidInput, "no target address"))?;
    let bind: SocketAddr = if target.is_ipv4() { "0.0.0.0:0" } else { "[::]:0" }.parse().unwrap();
    let socket = UdpSocket::bind(bind)?;
    let mut sent = 0;
    for d in datagrams {
        socket.send_to(&d.to_bytes(), target)?;
        sent += 1;
        // Loopback buffers are small; yield periodically so the receiver keeps up.
        if sent % 64 == 0 {
            std::thread::sleep(Duration::from_micros(200));
        }
    }
    Ok(sent)
}
