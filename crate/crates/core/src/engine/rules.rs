use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::EngineError;

pub const NUM_PLAYERS: usize = 2;
pub const STANDARD_HAND_SIZE: usize = 5;
pub const MAX_INFO_TOKENS: u8 = 8;
pub const MAX_STRIKES: u8 = 3;
pub const MAX_SCORE: u32 = 25;

/// What the final score is after the third strike.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrikeOut {
    /// Score drops to 0.
    #[default]
    Zero,
    /// Score stays at the sum of the fireworks.
    StacksStand,
}

impl fmt::Display for StrikeOut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrikeOut::Zero => "zero",
            StrikeOut::StacksStand => "stacks-stand",
        })
    }
}

impl FromStr for StrikeOut {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(StrikeOut::Zero),
            "stacks-stand" => Ok(StrikeOut::StacksStand),
            other => Err(EngineError::Config(format!("unknown strike-out mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RulesConfig {
    pub hand_size: usize,
    pub strike_out: StrikeOut,
}

impl Default for RulesConfig {
    fn default() -> Self {
        RulesConfig { hand_size: STANDARD_HAND_SIZE, strike_out: StrikeOut::Zero }
    }
}

impl RulesConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.hand_size != STANDARD_HAND_SIZE {
            return Err(EngineError::Config(format!(
                "hand size {} unsupported; two-player games use {STANDARD_HAND_SIZE}",
                self.hand_size
            )));
        }
        Ok(())
    }

    /// Canonical one-line form, `hand_size=5 strike_out=zero`.
    pub fn canonical(&self) -> String {
        format!("hand_size={} strike_out={}", self.hand_size, self.strike_out)
    }

    pub fn parse_canonical(s: &str) -> Result<RulesConfig, EngineError> {
        let bad = || EngineError::Config(format!("malformed config line `{s}`"));
        let mut parts = s.split(' ');
        let hand = parts.next().and_then(|p| p.strip_prefix("hand_size=")).ok_or_else(bad)?;
        let strike = parts.next().and_then(|p| p.strip_prefix("strike_out=")).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let config = RulesConfig { hand_size: hand.parse().map_err(|_| bad())?, strike_out: strike.parse()? };
        config.validate()?;
        Ok(config)
    }

    /// First 8 bytes of SHA-256 over the canonical form, as hex.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        for strike_out in [StrikeOut::Zero, StrikeOut::StacksStand] {
            let config = RulesConfig { strike_out, ..Default::default() };
            assert_eq!(RulesConfig::parse_canonical(&config.canonical()).unwrap(), config);
        }
        assert_ne!(
            RulesConfig::default().hash(),
            RulesConfig { strike_out: StrikeOut::StacksStand, ..Default::default() }.hash()
        );
        assert_eq!(RulesConfig::default().hash().len(), 16);
    }

    #[test]
    fn rejects_non_standard_hand() {
        let config = RulesConfig { hand_size: 4, ..Default::default() };
        assert!(matches!(config.validate(), Err(EngineError::Config(_))));
        assert!(RulesConfig::parse_canonical("hand_size=4 strike_out=zero").is_err());
        assert!(RulesConfig::parse_canonical("hand_size=5").is_err());
    }
}
