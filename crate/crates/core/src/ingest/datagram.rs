use super::IngestError;

pub const HEADER_LEN: usize = 10;
pub const MAX_PAYLOAD: usize = 1456;
/// Largest value representable in the 48-bit byte-count field.
pub const MAX_BYTE_COUNT: u64 = (1 << 48) - 1;

/// One capture-card UDP datagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Datagram {
    pub seq: u32,
    /// Offset of the first payload byte in the session byte stream.
    pub byte_count: u64,
    pub payload: Vec<u8>,
}

impl Datagram {
    pub fn new(seq: u32, byte_count: u64, payload: Vec<u8>) -> Result<Self, IngestError> {
        if payload.is_empty() {
            return Err(IngestError::TooShort { len: HEADER_LEN });
        }
        if payload.len() > MAX_PAYLOAD {
            return Err(IngestError::PayloadTooLarge { len: payload.len() });
        }
        if byte_count > MAX_BYTE_COUNT {
            return Err(IngestError::ByteCountOverflow(byte_count));
        }
        Ok(Self { seq, byte_count, payload })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&self.seq.to_le_bytes());
        out.extend_from_slice(&self.byte_count.to_le_bytes()[..6]);
        out.extend_from_slice(&self.payload);
        out
    }

    /// Offset one past the last payload byte.
    pub fn end_offset(&self) -> u64 {
        self.byte_count + self.payload.len() as u64
    }
}

pub fn parse_datagram(bytes: &[u8]) -> Result<Datagram, IngestError> {
    if bytes.len() <= HEADER_LEN {
        return Err(IngestError::TooShort { len: bytes.len() });
    }
    let payload = &bytes[HEADER_LEN..];
    if payload.len() > MAX_PAYLOAD {
        return Err(IngestError::PayloadTooLarge { len: payload.len() });
    }
    let seq = u32::from_le_bytes(bytes[0..4].try_into().unwrap());
    let mut count = [0u8; 8];
    count[..6].copy_from_slice(&bytes[4..10]);
    Ok(Datagram {
        seq,
        byte_count: u64::from_le_bytes(count),
        payload: payload.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_packet() {
        let mut bytes = vec![0u8; 10];
        bytes.extend_from_slice(&[1, 2, 3, 4]);
        let d = parse_datagram(&bytes).unwrap();
        assert_eq!(d.seq, 0);
        assert_eq!(d.byte_count, 0);
        assert_eq!(d.payload, vec![1, 2, 3, 4]);
    }

    #[test]
    fn header_only_is_too_short() {
        assert!(matches!(parse_datagram(&[0u8; 10]), Err(IngestError::TooShort { len: 10 })));
        assert!(matches!(parse_datagram(&[]), Err(IngestError::TooShort { len: 0 })));
    }

    #[test]
    fn oversize_payload() {
        let bytes = vec![0u8; HEADER_LEN + MAX_PAYLOAD + 1];
        assert!(matches!(parse_datagram(&bytes), Err(IngestError::PayloadTooLarge { len: 1457 })));
        let bytes = vec![0u8; HEADER_LEN + MAX_PAYLOAD];
        assert!(parse_datagram(&bytes).is_ok());
    }

    #[test]
    fn header_is_little_endian() {
        let d = Datagram::new(7, 1456 * 7, vec![0xAB; 1456]).unwrap();
        let bytes = d.to_bytes();
        assert_eq!(&bytes[0..4], &[7, 0, 0, 0]);
        // 10192 = 0x27D0
        assert_eq!(&bytes[4..10], &[0xD0, 0x27, 0, 0, 0, 0]);
        assert_eq!(parse_datagram(&bytes).unwrap(), d);
    }

    #[test]
    fn byte_count_uses_all_48_bits() {
        let d = Datagram::new(u32::MAX, MAX_BYTE_COUNT, vec![1]).unwrap();
        assert_eq!(parse_datagram(&d.to_bytes()).unwrap(), d);
        assert!(Datagram::new(0, MAX_BYTE_COUNT + 1, vec![1]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(seq in any::<u32>(), count in 0..=MAX_BYTE_COUNT,
                      payload in proptest::collection::vec(any::<u8>(), 1..=MAX_PAYLOAD)) {
            let d = Datagram::new(seq, count, payload).unwrap();
            prop_assert_eq!(parse_datagram(&d.to_bytes()).unwrap(), d);
        }

        #[test]
        fn parsing_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..1600)) {
            match parse_datagram(&bytes) {
                Ok(d) => {
                    prop_assert!(!d.payload.is_empty() && d.payload.len() <= MAX_PAYLOAD);
                    prop_assert!(d.byte_count <= MAX_BYTE_COUNT);
                    prop_assert_eq!(d.to_bytes(), bytes);
                }
                Err(IngestError::TooShort { .. }) => prop_assert!(bytes.len() <= HEADER_LEN),
                Err(IngestError::PayloadTooLarge { .. }) => prop_assert!(bytes.len() > HEADER_LEN + MAX_PAYLOAD),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
