use rayon::prelude::*;

use super::{ExtractOptions, ExtractionRecord, PreparedTranslation};
use crate::corpus::{LemmaForm, LemmaOccurrenceIndex, Translation};
use crate::error::{Error, Result};
use crate::tokenizer::TokenizationMethod;

/// Everything one extraction run reads. All of it is immutable while the
/// workers run.
pub struct ExtractionJob<'a> {
    pub translations: &'a [Translation],
    pub forms: &'a [LemmaForm],
    pub index: &'a LemmaOccurrenceIndex,
    pub methods: &'a [TokenizationMethod],
    pub options: ExtractOptions,
}

/// Extracts every (translation, method, form) on a pool of `workers`
/// threads. The result is sorted by translation, lemma form and method, so
/// it does not depend on the pool size or on scheduling.
pub fn run_extraction(job: &ExtractionJob<'_>, workers: usize) -> Result<Vec<ExtractionRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Argument(format!("cannot start worker pool: {e}")))?;

    let tasks: Vec<(&Translation, TokenizationMethod)> = job
        .translations
        .iter()
        .flat_map(|t| job.methods.iter().map(move |m| (t, *m)))
        .collect();

    let mut records: Vec<ExtractionRecord> = pool.install(|| {
        tasks
            .par_iter()
            .flat_map(|(translation, method)| {
                let prepared = PreparedTranslation::new(translation, *method, job.options);
                let found: Vec<ExtractionRecord> = job
                    .forms
                    .par_iter()
                    .filter_map(|f| prepared.extract_form(f, job.index))
                    .collect();
                log::info!(
                    "{} [{}]: {} of {} forms extracted from {} verses",
                    translation.translation_id,
                    method,
                    found.len(),
                    job.forms.len(),
                    prepared.captured()
                );
                found
            })
            .collect()
    });
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    log::info!("{} records in total", records.len());
    Ok(records)
}
