/**
 * Line-delimited JSON protocol spoken over stdin/stdout.
 *
 * Harness -> adapter:
 *   {"op":"hello","version":1}
 *   {"op":"transcribe","items":[{"id":...,"audio":...,"language":...}]}
 *   {"op":"bye"}
 *
 * Adapter -> harness:
 *   {"op":"hello","name":...,"version":1}
 *   {"op":"result","items":[{"id":...,"text":...,"infer_ms":...}]}
 *   {"op":"error","kind":"capacity"|"fatal","msg":...}
 *
 * One UTF-8 JSON document per line, nothing else on stdout.
 */

export const PROTOCOL_VERSION = 1;

export interface TranscribeItem {
  id: string;
  audio: string;
  language?: string | null;
}

export interface ResultItem {
  id: string;
  text: string;
  infer_ms?: number;
}

export type InboundMessage =
  | { op: 'hello'; version: number }
  | { op: 'transcribe'; items: TranscribeItem[] }
  | { op: 'bye' };

export type OutboundMessage =
  | { op: 'hello'; name: string; version: number }
  | { op: 'result'; items: ResultItem[] }
  | { op: 'error'; kind: 'capacity' | 'fatal'; msg: string };

export function parseInbound(line: string): InboundMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new Error(`not a JSON document: ${line.slice(0, 120)}`);
  }
  if (typeof raw !== 'object' || raw === null || Array.isArray(raw)) {
    throw new Error('message must be a JSON object');
  }
  const msg = raw as Record<string, unknown>;
  switch (msg.op) {
    case 'hello': {
      if (typeof msg.version !== 'number') {
        throw new Error('hello requires a numeric version');
      }
      return { op: 'hello', version: msg.version };
    }
    case 'transcribe': {
      if (!Array.isArray(msg.items)) {
        throw new Error('transcribe requires an items array');
      }
      const items: TranscribeItem[] = msg.items.map((item, index) => {
        if (typeof item !== 'object' || item === null) {
          throw new Error(`items[${index}] is not an object`);
        }
        const record = item as Record<string, unknown>;
        if (typeof record.id !== 'string' || record.id.length === 0) {
          throw new Error(`items[${index}] is missing an id`);
        }
        return {
          id: record.id,
          audio: typeof record.audio === 'string' ? record.audio : '',
          language: typeof record.language === 'string' ? record.language : null,
        };
      });
      return { op: 'transcribe', items };
    }
    case 'bye':
      return { op: 'bye' };
    default:
      throw new Error(`unknown op: ${String(msg.op)}`);
  }
}

export function serialize(msg: OutboundMessage): string {
  return JSON.stringify(msg) + '\n';
}
