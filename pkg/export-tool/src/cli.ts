#!/usr/bin/env node
/**
 * maskstego-export: package a local masked-LM checkpoint for the maskstego
 * `model:<dir>` backend, and cross-check the reference tokenizer.
 *
 * Usage:
 *   maskstego-export export --model <checkpoint-dir> --out <bundle-dir>
 *   maskstego-export check-tokenizer --vocab <vocab.txt> --text <file> --reference <ids-file>
 *
 * The reference ids file is the output of `maskstego tokenize --ids`; the
 * check requires agreement on at least 99.9% of token positions and prints
 * every mismatch for review.
 */

import { readFileSync } from 'node:fs';
import { parseArgs } from 'node:util';
import { ExportError, descriptorStanza, exportBundle } from './bundle.js';
import { Vocabulary } from './wordpiece.js';

const MIN_AGREEMENT = 0.999;

function usage(): never {
  process.stderr.write(
    'usage: maskstego-export export --model <dir> --out <dir>\n' +
    '       maskstego-export check-tokenizer --vocab <file> --text <file> --reference <file>\n',
  );
  process.exit(2);
}

function cmdExport(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: { model: { type: 'string' }, out: { type: 'string' } },
  });
  if (!values.model || !values.out) usage();
  const bundle = exportBundle(values.model, values.out);
  process.stdout.write(descriptorStanza(bundle));
  process.stderr.write(
    `wrote ${bundle.files.length} files to ${bundle.outDir} ` +
    `(vocabulary: ${bundle.vocabSize} entries)\n`,
  );
  return 0;
}

export interface CheckResult {
  compared: number;
  mismatches: Array<{ position: number; expected: number | null; actual: number | null }>;
  agreement: number;
}

export function checkTokenizer(vocabRaw: string, text: string, referenceIds: number[]): CheckResult {
  const vocab = Vocabulary.fromFileContents(vocabRaw);
  const actual = vocab.tokenizeToIds(text);
  const compared = Math.max(actual.length, referenceIds.length);
  const mismatches: CheckResult['mismatches'] = [];
  for (let i = 0; i < compared; i++) {
    const want = i < referenceIds.length ? referenceIds[i] : null;
    const got = i < actual.length ? actual[i] : null;
    if (want !== got) mismatches.push({ position: i, expected: want, actual: got });
  }
  return { compared, mismatches, agreement: compared === 0 ? 1 : 1 - mismatches.length / compared };
}

function cmdCheckTokenizer(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      vocab: { type: 'string' },
      text: { type: 'string' },
      reference: { type: 'string' },
    },
  });
  if (!values.vocab || !values.text || !values.reference) usage();
  const referenceIds = readFileSync(values.reference, 'utf-8')
    .split(/\s+/)
    .filter(Boolean)
    .map(Number);
  const result = checkTokenizer(
    readFileSync(values.vocab, 'utf-8'),
    readFileSync(values.text, 'utf-8'),
    referenceIds,
  );
  for (const m of result.mismatches) {
    process.stderr.write(
      `mismatch at token ${m.position}: reference=${m.expected} ours=${m.actual}\n`,
    );
  }
  process.stdout.write(
    `tokens=${result.compared} mismatches=${result.mismatches.length} ` +
    `agreement=${result.agreement.toFixed(6)}\n`,
  );
  return result.agreement >= MIN_AGREEMENT ? 0 : 1;
}

function main(): number {
  const [command, ...rest] = process.argv.slice(2);
  try {
    if (command === 'export') return cmdExport(rest);
    if (command === 'check-tokenizer') return cmdCheckTokenizer(rest);
  } catch (err) {
    if (err instanceof ExportError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
  usage();
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main());
}
