/**
 * Protocol server loop: one request in flight, replies on the same line
 * boundary it reads. Runs until "bye", end of input, or a fatal error.
 */

import { createInterface } from 'readline';
import type { Readable, Writable } from 'stream';
import { setTimeout as sleep } from 'timers/promises';

import { PROTOCOL_VERSION, parseInbound, serialize } from './protocol.js';
import { CapacityExceeded, FixtureTranscriber } from './transcriber.js';

export interface ServeOptions {
  name?: string;
  input?: Readable;
  output?: Writable;
}

/** Exit code: 0 after a clean "bye" or end of input, 1 after a fatal error. */
export async function serveStdio(
  transcriber: FixtureTranscriber,
  options: ServeOptions = {},
): Promise<number> {
  const name = options.name ?? 'fixture';
  const input = options.input ?? process.stdin;
  const output = options.output ?? process.stdout;
  const write = (msg: Parameters<typeof serialize>[0]) => {
    output.write(serialize(msg));
  };

  const lines = createInterface({ input, terminal: false });
  for await (const line of lines) {
    if (!line.trim()) {
      continue;
    }
    let msg;
    try {
      msg = parseInbound(line);
    } catch (err) {
      write({ op: 'error', kind: 'fatal', msg: `malformed input: ${(err as Error).message}` });
      lines.close();
      return 1;
    }
    if (msg.op === 'hello') {
      write({ op: 'hello', name, version: PROTOCOL_VERSION });
    } else if (msg.op === 'transcribe') {
      try {
        const results = transcriber.transcribe(msg.items);
        const ms = transcriber.simulatedMs(msg.items);
        if (ms > 0) {
          await sleep(ms);
        }
        write({ op: 'result', items: results });
      } catch (err) {
        if (err instanceof CapacityExceeded) {
          write({ op: 'error', kind: 'capacity', msg: err.message });
        } else {
          write({ op: 'error', kind: 'fatal', msg: (err as Error).message });
          lines.close();
          return 1;
        }
      }
    } else {
      lines.close();
      return 0;
    }
  }
  return 0;
}
