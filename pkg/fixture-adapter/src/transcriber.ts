/**
 * Fixture-backed transcription: hypotheses come from a lookup table, never
 * from audio. Lookup misses yield an empty hypothesis rather than failing,
 * and an optional batch ceiling mimics a backend running out of memory.
 */

import { readFileSync } from 'fs';

import type { ResultItem, TranscribeItem } from './protocol.js';

/** Batch larger than the configured ceiling; retryable by the harness. */
export class CapacityExceeded extends Error {}

export interface FixtureOptions {
  maxBatch?: number;
  msPerAudioSecond?: number;
  durations?: Map<string, number>;
}

export class FixtureTranscriber {
  readonly table: Map<string, string>;
  readonly maxBatch?: number;
  readonly msPerAudioSecond?: number;
  readonly durations: Map<string, number>;

  constructor(table: Map<string, string>, options: FixtureOptions = {}) {
    this.table = table;
    this.maxBatch = options.maxBatch;
    this.msPerAudioSecond = options.msPerAudioSecond;
    this.durations = options.durations ?? new Map();
  }

  /** Simulated latency for a batch, in milliseconds. */
  simulatedMs(items: TranscribeItem[]): number {
    if (!this.msPerAudioSecond) {
      return 0;
    }
    let audioSeconds = 0;
    for (const item of items) {
      audioSeconds += this.durations.get(item.id) ?? 0;
    }
    return this.msPerAudioSecond * audioSeconds;
  }

  transcribe(items: TranscribeItem[]): ResultItem[] {
    if (this.maxBatch !== undefined && items.length > this.maxBatch) {
      throw new CapacityExceeded(
        `batch of ${items.length} exceeds max_batch=${this.maxBatch}`,
      );
    }
    return items.map((item) => ({
      id: item.id,
      text: this.table.get(item.id) ?? '',
      infer_ms: 1.0,
    }));
  }
}

/**
 * Parse a fixture file: `sample_id<TAB>hypothesis[<TAB>duration_s]` rows,
 * bare `key=value` config lines (max_batch, ms_per_audio_second), and `#`
 * comments. Same format the harness's in-process mock reads.
 */
export function loadFixture(path: string): FixtureTranscriber {
  const table = new Map<string, string>();
  const durations = new Map<string, number>();
  let maxBatch: number | undefined;
  let msPerAudioSecond: number | undefined;

  const text = readFileSync(path, 'utf-8');
  text.split('\n').forEach((rawLine, index) => {
    const line = rawLine.replace(/\r$/, '');
    if (!line.trim() || line.trimStart().startsWith('#')) {
      return;
    }
    const lineno = index + 1;
    if (line.includes('\t')) {
      const parts = line.split('\t');
      table.set(parts[0], parts[1] ?? '');
      if (parts.length >= 3 && parts[2]) {
        const duration = Number(parts[2]);
        if (Number.isNaN(duration)) {
          throw new Error(`${path}:${lineno}: bad duration ${parts[2]}`);
        }
        durations.set(parts[0], duration);
      }
    } else if (line.includes('=')) {
      const eq = line.indexOf('=');
      const key = line.slice(0, eq).trim();
      const value = line.slice(eq + 1).trim();
      if (key === 'max_batch') {
        maxBatch = Number.parseInt(value, 10);
        if (Number.isNaN(maxBatch)) {
          throw new Error(`${path}:${lineno}: bad max_batch ${value}`);
        }
      } else if (key === 'ms_per_audio_second') {
        msPerAudioSecond = Number(value);
        if (Number.isNaN(msPerAudioSecond)) {
          throw new Error(`${path}:${lineno}: bad ms_per_audio_second ${value}`);
        }
      } else {
        throw new Error(`${path}:${lineno}: unknown fixture config key ${key}`);
      }
    } else {
      throw new Error(`${path}:${lineno}: malformed fixture line`);
    }
  });

  return new FixtureTranscriber(table, { maxBatch, msPerAudioSecond, durations });
}
