# Copyright 2021 The RCNoise Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Chunked Monte Carlo averaging. Chunk k always gets the k-th child of
# SeedSequence(seed) and the partial sums are added in chunk order, so the
# result depends only on (seed, samples, chunk_size) and never on the
# number of worker processes.

from functools import partial
from multiprocessing import Pool

import numpy as np
from progress.bar import Bar

from .errors import ValidationError

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

DEFAULT_CHUNK_SIZE = 10000

class MCEstimate(object):
    """Sample mean and standard error (std / sqrt(samples)) per component"""

    def __init__(self, mean, stderr, samples):
        self.mean = mean
        self.stderr = stderr
        self.samples = samples

    def within(self, expected, nsigma=3.0, floor=1e-12):
        """True if every component of <expected> lies within nsigma standard errors"""
        return bool(np.all(np.abs(self.mean - expected) <= nsigma * self.stderr + floor))

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'MCEstimate(shape={}, samples={})'.format(np.shape(self.mean), self.samples)

def chunk_sizes(samples, chunk_size):
    if samples < 1:
        raise ValidationError('Monte Carlo sample count must be >= 1 (got {})'.format(samples))
    if chunk_size < 1:
        raise ValidationError('Monte Carlo chunk size must be >= 1 (got {})'.format(chunk_size))
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest > 0 else [])

def _run_chunk(worker, job):
    seed_seq, count = job
    x = np.asarray(worker(np.random.default_rng(seed_seq), count), dtype=float)
    return x.sum(axis=0), (x * x).sum(axis=0)

def run_chunked(worker, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1, show_progress=False):
    """Average a sampled real quantity over <samples> draws.

    Args:
        worker: picklable callable worker(rng, count) returning an array of
            shape (count, ...) with one row per sample
        samples: total number of samples
        seed: integer seed for the whole run
        chunk_size: samples per independently seeded chunk
        workers: number of processes; 1 runs in-process
        show_progress: display a progress bar on the terminal

    Returns:
        MCEstimate with mean and standard error of each component
    """
    sizes = chunk_sizes(samples, chunk_size)
    jobs = list(zip(np.random.SeedSequence(seed).spawn(len(sizes)), sizes))
    func = partial(_run_chunk, worker)
    logger.debug('Monte Carlo: {} samples in {} chunks, {} worker(s)'.format(samples, len(jobs), workers))

    bar = Bar('sampling', max=len(jobs), suffix='%(percent)d%%') if show_progress else None
    results = []
    if workers > 1:
        with Pool(workers) as pool:
            # imap keeps submission order
            for r in pool.imap(func, jobs):
                results.append(r)
                if bar is not None:
                    bar.next()
    else:
        for job in jobs:
            results.append(func(job))
            if bar is not None:
                bar.next()
    if bar is not None:
        bar.finish()

    total, total_sq = results[0]
    for s, sq in results[1:]:
        total = total + s
        total_sq = total_sq + sq

    mean = total / samples
    if samples > 1:
        var = np.maximum(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
        stderr = np.sqrt(var / samples)
    else:
        stderr = np.full_like(mean, np.inf)
    return MCEstimate(mean, stderr, samples)
