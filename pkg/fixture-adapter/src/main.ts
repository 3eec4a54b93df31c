#!/usr/bin/env node
/**
 * Entry point: load a fixture table and serve the stdio protocol until the
 * harness says bye. Also the template for wrapping a real speech-to-text
 * model: replace FixtureTranscriber with something that reads the audio
 * paths it is handed.
 */

import { parseArgs } from 'node:util';

import { serveStdio } from './server.js';
import { FixtureTranscriber, loadFixture } from './transcriber.js';

function usage(): never {
  process.stderr.write(
    'usage: asr-fixture-adapter --fixture PATH [--name NAME] [--max-batch N] [--ms-per-audio-second X]\n',
  );
  process.exit(2);
}

async function main(): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      options: {
        fixture: { type: 'string' },
        name: { type: 'string', default: 'fixture' },
        'max-batch': { type: 'string' },
        'ms-per-audio-second': { type: 'string' },
      },
    }));
  } catch {
    usage();
  }

  let transcriber: FixtureTranscriber;
  try {
    transcriber = values.fixture
      ? loadFixture(values.fixture)
      : new FixtureTranscriber(new Map());
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }

  // flags override fixture-file config keys
  const maxBatch = values['max-batch'] !== undefined
    ? Number.parseInt(values['max-batch'], 10)
    : transcriber.maxBatch;
  const msPerAudioSecond = values['ms-per-audio-second'] !== undefined
    ? Number(values['ms-per-audio-second'])
    : transcriber.msPerAudioSecond;
  if ((maxBatch !== undefined && Number.isNaN(maxBatch))
      || (msPerAudioSecond !== undefined && Number.isNaN(msPerAudioSecond))) {
    usage();
  }

  const configured = new FixtureTranscriber(transcriber.table, {
    maxBatch,
    msPerAudioSecond,
    durations: transcriber.durations,
  });
  return serveStdio(configured, { name: values.name });
}

main().then(
  (code) => process.exit(code),
  (err) => {
    process.stderr.write(`fatal: ${err}\n`);
    process.exit(1);
  },
);
