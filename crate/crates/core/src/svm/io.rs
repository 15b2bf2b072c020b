use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::model::LinearModel;
use crate::error::{Error, Result};
use crate::features::{
    ContextMode, ContextSpec, FeatureConfig, FeatureDictionary, Featurizer, KeySpace,
    LabelDimensions, MarkupMode, NGramSpec,
};

pub const MODEL_MAGIC: &str = "dlsvm";
pub const MODEL_VERSION: &str = "v1";
pub const DICT_MAGIC: &str = "dactx-dict";

pub fn write_model(model: &LinearModel, mut out: impl Write) -> Result<()> {
    writeln!(out, "{MODEL_MAGIC} {MODEL_VERSION}")?;
    writeln!(
        out,
        "classes {} features {} bias {}",
        model.n_classes(),
        model.n_features,
        model.bias
    )?;
    for label in &model.labels {
        writeln!(out, "{label}")?;
    }
    for (c, row) in model.weights.iter().enumerate() {
        write!(out, "{c}")?;
        for (i, w) in row.iter().enumerate() {
            if *w != 0.0 {
                write!(out, " {i}:{w}")?;
            }
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_model(input: impl BufRead) -> Result<LinearModel> {
    let mut lines = input.lines();
    let mut next = |what: &str| -> Result<String> {
        match lines.next() {
            Some(line) => Ok(line?),
            None => Err(Error::ModelFormat(format!("truncated before {what}"))),
        }
    };

    let magic = next("header")?;
    match magic.split_once(' ') {
        Some((MODEL_MAGIC, MODEL_VERSION)) => {}
        Some((MODEL_MAGIC, v)) => return Err(Error::Version(v.to_string())),
        _ => return Err(Error::ModelFormat(format!("bad header `{magic}`"))),
    }

    let dims = next("dimensions")?;
    let fields: Vec<&str> = dims.split_whitespace().collect();
    let (k, d, bias) = match fields.as_slice() {
        ["classes", k, "features", d, "bias", b] => (
            k.parse::<usize>().map_err(|_| bad("class count", k))?,
            d.parse::<usize>().map_err(|_| bad("feature count", d))?,
            b.parse::<f64>().map_err(|_| bad("bias", b))?,
        ),
        _ => return Err(Error::ModelFormat(format!("bad dimension line `{dims}`"))),
    };

    let labels = (0..k)
        .map(|_| next("class labels"))
        .collect::<Result<Vec<_>>>()?;
    let mut weights = Vec::with_capacity(k);
    for c in 0..k {
        let line = next("weights")?;
        let mut parts = line.split_whitespace();
        let idx = parts.next().ok_or_else(|| bad("class index", ""))?;
        if idx.parse::<usize>().ok() != Some(c) {
            return Err(bad("class index", idx));
        }
        let mut row = vec![0.0; d + 1];
        for pair in parts {
            let (i, w) = pair.split_once(':').ok_or_else(|| bad("weight", pair))?;
            let i: usize = i.parse().map_err(|_| bad("weight index", pair))?;
            let w: f64 = w.parse().map_err(|_| bad("weight value", pair))?;
            if i > d {
                return Err(bad("weight index", pair));
            }
            row[i] = w;
        }
        weights.push(row);
    }
    Ok(LinearModel {
        labels,
        n_features: d,
        bias,
        weights,
        params: None,
    })
}

fn bad(what: &str, value: &str) -> Error {
    Error::ModelFormat(format!("bad {what} `{value}`"))
}

pub fn save_model(model: &LinearModel, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::file(path, e))?;
    write_model(model, BufWriter::new(file)).map_err(|e| with_path(e, path))
}

pub fn load_model(path: &Path) -> Result<LinearModel> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    read_model(BufReader::new(file)).map_err(|e| with_path(e, path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io(io) => Error::file(path, io),
        other => other,
    }
}

/// Settings needed to rebuild samples for a saved model.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSettings {
    pub features: FeatureConfig,
    pub context: ContextSpec,
    pub aux_dimensions: Vec<String>,
}

/// A model together with its feature dictionary and the key space the
/// dictionary was rendered from.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub model: LinearModel,
    pub dictionary: FeatureDictionary,
    pub featurizer: Featurizer,
    pub settings: FeatureSettings,
}

/// Path of the dictionary file stored next to a model.
pub fn dictionary_path(model_path: &Path) -> PathBuf {
    let mut s = model_path.as_os_str().to_owned();
    s.push(".dict");
    PathBuf::from(s)
}

impl ModelBundle {
    pub fn save(&self, path: &Path) -> Result<()> {
        save_model(&self.model, path)?;
        let dict_path = dictionary_path(path);
        let file = File::create(&dict_path).map_err(|e| Error::file(&dict_path, e))?;
        write_dictionary(
            &self.dictionary,
            &self.featurizer.space,
            &self.settings,
            BufWriter::new(file),
        )
        .map_err(|e| with_path(e, &dict_path))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let model = load_model(path)?;
        let dict_path = dictionary_path(path);
        let file = File::open(&dict_path).map_err(|e| Error::file(&dict_path, e))?;
        let (settings, keys) =
            read_dictionary(BufReader::new(file)).map_err(|e| with_path(e, &dict_path))?;
        let mut space = KeySpace::default();
        let dictionary = FeatureDictionary::from_rendered(&keys, &mut space)?;
        if dictionary.len() != model.n_features {
            return Err(Error::ModelFormat(format!(
                "dictionary has {} keys but the model expects {} features",
                dictionary.len(),
                model.n_features
            )));
        }
        let featurizer = Featurizer::with_space(settings.features, &settings.aux_dimensions, space);
        Ok(ModelBundle {
            model,
            dictionary,
            featurizer,
            settings,
        })
    }
}

pub fn write_dictionary(
    dict: &FeatureDictionary,
    space: &KeySpace,
    settings: &FeatureSettings,
    mut out: impl Write,
) -> Result<()> {
    writeln!(out, "{DICT_MAGIC} {MODEL_VERSION}")?;
    let f = &settings.features;
    writeln!(
        out,
        "max_n={} cumulative={} markup={} context={} n_prev={} aux={}",
        f.ngrams.max_n,
        f.ngrams.cumulative,
        f.markup,
        settings.context.mode().name(),
        settings.context.n_prev(),
        settings.aux_dimensions.join(",")
    )?;
    writeln!(out, "keys {}", dict.len())?;
    for key in dict.render(space) {
        writeln!(out, "{key}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_dictionary(input: impl BufRead) -> Result<(FeatureSettings, Vec<String>)> {
    let mut lines = input.lines();
    let mut next = |what: &str| -> Result<String> {
        match lines.next() {
            Some(line) => Ok(line?),
            None => Err(Error::ModelFormat(format!(
                "dictionary truncated before {what}"
            ))),
        }
    };
    let magic = next("header")?;
    match magic.split_once(' ') {
        Some((DICT_MAGIC, MODEL_VERSION)) => {}
        Some((DICT_MAGIC, v)) => return Err(Error::Version(v.to_string())),
        _ => {
            return Err(Error::ModelFormat(format!(
                "bad dictionary header `{magic}`"
            )))
        }
    }

    let config = next("settings")?;
    let mut max_n = None;
    let mut cumulative = None;
    let mut markup = None;
    let mut mode = None;
    let mut n_prev = None;
    let mut aux = Vec::new();
    for field in config.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| bad("setting", field))?;
        match k {
            "max_n" => max_n = Some(v.parse::<usize>().map_err(|_| bad("max_n", v))?),
            "cumulative" => cumulative = Some(v.parse::<bool>().map_err(|_| bad("cumulative", v))?),
            "markup" => markup = Some(v.parse::<MarkupMode>().map_err(|_| bad("markup", v))?),
            "context" => mode = Some(v.to_string()),
            "n_prev" => n_prev = Some(v.parse::<usize>().map_err(|_| bad("n_prev", v))?),
            "aux" => {
                aux = v
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            _ => return Err(bad("setting", field)),
        }
    }
    let missing = |what: &str| Error::ModelFormat(format!("dictionary settings lack `{what}`"));
    let ngrams = NGramSpec::new(
        max_n.ok_or_else(|| missing("max_n"))?,
        cumulative.ok_or_else(|| missing("cumulative"))?,
    )
    .map_err(|e| Error::ModelFormat(e.to_string()))?;
    let mode = ContextMode::parse(
        &mode.ok_or_else(|| missing("context"))?,
        LabelDimensions::Task,
    )
    .map_err(|e| Error::ModelFormat(e.to_string()))?;
    let context = ContextSpec::new(mode, n_prev.ok_or_else(|| missing("n_prev"))?)
        .map_err(|e| Error::ModelFormat(e.to_string()))?;
    let settings = FeatureSettings {
        features: FeatureConfig {
            ngrams,
            markup: markup.ok_or_else(|| missing("markup"))?,
        },
        context,
        aux_dimensions: aux,
    };

    let count_line = next("key count")?;
    let n: usize = count_line
        .strip_prefix("keys ")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| bad("key count", &count_line))?;
    let keys = (0..n).map(|_| next("keys")).collect::<Result<Vec<_>>>()?;
    Ok((settings, keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(weights: Vec<Vec<f64>>) -> LinearModel {
        LinearModel {
            labels: (0..weights.len()).map(|c| format!("l{c}")).collect(),
            n_features: weights[0].len() - 1,
            bias: 1.0,
            weights,
            params: None,
        }
    }

    #[test]
    fn rejects_other_versions_and_truncation() {
        let mut buf = Vec::new();
        write_model(&model(vec![vec![1.0, 0.0, 0.5]]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let v2 = text.replacen("dlsvm v1", "dlsvm v2", 1);
        assert!(matches!(read_model(v2.as_bytes()), Err(Error::Version(v)) if v == "v2"));
        let cut: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            read_model(cut.as_bytes()),
            Err(Error::ModelFormat(_))
        ));
        assert!(matches!(
            read_model(&b"garbage\n"[..]),
            Err(Error::ModelFormat(_))
        ));
    }

    #[test]
    fn save_to_unwritable_path_fails() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let err = save_model(&model(vec![vec![0.0]]), &blocker.join("m")).unwrap_err();
        assert!(matches!(err, Error::File { .. }));
    }

    #[test]
    fn dictionary_settings_round_trip() {
        let settings = FeatureSettings {
            features: FeatureConfig {
                ngrams: NGramSpec::new(3, false).unwrap(),
                markup: MarkupMode::Atomic,
            },
            context: ContextSpec::new(ContextMode::IndexTaggedNGrams, 2).unwrap(),
            aux_dimensions: vec!["feedback".into(), "turn".into()],
        };
        let mut buf = Vec::new();
        write_dictionary(
            &FeatureDictionary::new(),
            &KeySpace::default(),
            &settings,
            &mut buf,
        )
        .unwrap();
        let (back, keys) = read_dictionary(buf.as_slice()).unwrap();
        assert_eq!(back, settings);
        assert!(keys.is_empty());
    }

    proptest! {
        #[test]
        fn model_round_trips_bit_exactly(
            rows in prop::collection::vec(prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 4), 1..5),
        ) {
            let m = model(rows);
            let mut buf = Vec::new();
            write_model(&m, &mut buf).unwrap();
            let back = read_model(buf.as_slice()).unwrap();
            prop_assert_eq!(back.labels, m.labels);
            for (a, b) in back.weights.iter().flatten().zip(m.weights.iter().flatten()) {
                prop_assert_eq!(a.to_bits(), if *b == 0.0 { 0.0f64.to_bits() } else { b.to_bits() });
            }
        }
    }
}
