/**
 * Bundle assembly: validate a local masked-LM checkpoint directory and copy
 * it atomically into the layout the maskstego `model:<dir>` backend loads
 * (config + weights + line-indexed vocab.txt), together with a digests file.
 *
 * Digest conventions match the Python side: the model digest is SHA-256
 * over the weight files' bytes concatenated in filename order, and the
 * vocabulary digest is SHA-256 of the raw vocab.txt bytes.
 */

import { createHash } from 'node:crypto';
import { cpSync, existsSync, mkdtempSync, readFileSync, readdirSync, renameSync, rmSync, statSync, writeFileSync } from 'node:fs';
import { dirname, join } from 'node:path';

const WEIGHT_SUFFIXES = ['.safetensors', '.bin'];

export interface ExportBundle {
  outDir: string;
  files: string[];
  modelDigest: string;
  vocabDigest: string;
  vocabSize: number;
}

export class ExportError extends Error {}

function sha256(data: Buffer): string {
  return createHash('sha256').update(data).digest('hex');
}

function listFiles(dir: string): string[] {
  return readdirSync(dir)
    .filter((name) => statSync(join(dir, name)).isFile())
    .sort();
}

export function validateModelDir(modelDir: string): { files: string[]; weightFiles: string[]; vocabSize: number } {
  if (!existsSync(modelDir) || !statSync(modelDir).isDirectory()) {
    throw new ExportError(`model directory not found: ${modelDir}`);
  }
  const files = listFiles(modelDir);
  if (!files.includes('config.json')) {
    throw new ExportError(`no config.json in ${modelDir}`);
  }
  if (!files.includes('vocab.txt')) {
    throw new ExportError(`no vocab.txt in ${modelDir}`);
  }
  const weightFiles = files.filter((f) => WEIGHT_SUFFIXES.some((s) => f.endsWith(s)));
  if (weightFiles.length === 0) {
    throw new ExportError(`no weight files (*.safetensors, *.bin) in ${modelDir}`);
  }
  let config: { vocab_size?: unknown };
  try {
    config = JSON.parse(readFileSync(join(modelDir, 'config.json'), 'utf-8'));
  } catch (err) {
    throw new ExportError(`unreadable config.json: ${err}`);
  }
  if (typeof config.vocab_size !== 'number') {
    throw new ExportError('config.json has no numeric vocab_size');
  }
  const vocabLines = readFileSync(join(modelDir, 'vocab.txt'), 'utf-8')
    .split('\n')
    .filter((line) => line.length > 0);
  if (vocabLines.length !== config.vocab_size) {
    throw new ExportError(
      `vocabulary has ${vocabLines.length} entries but the model output ` +
      `dimension is ${config.vocab_size}`,
    );
  }
  return { files, weightFiles, vocabSize: config.vocab_size };
}

/**
 * Copies the checkpoint into `outDir` and writes `digests.txt`. The copy is
 * staged in a sibling temp directory and renamed into place, so a failure
 * at any point leaves no partial bundle behind.
 */
export function exportBundle(modelDir: string, outDir: string): ExportBundle {
  const { files, weightFiles, vocabSize } = validateModelDir(modelDir);
  if (existsSync(outDir)) {
    throw new ExportError(`output directory already exists: ${outDir}`);
  }
  const staging = mkdtempSync(join(dirname(outDir) || '.', '.export-staging-'));
  try {
    const digestLines: string[] = [];
    for (const name of files) {
      const data = readFileSync(join(modelDir, name));
      cpSync(join(modelDir, name), join(staging, name));
      digestLines.push(`${sha256(data)}  ${name}`);
    }
    const modelHash = createHash('sha256');
    for (const name of weightFiles) {
      modelHash.update(readFileSync(join(modelDir, name)));
    }
    const modelDigest = modelHash.digest('hex');
    const vocabDigest = sha256(readFileSync(join(modelDir, 'vocab.txt')));
    writeFileSync(join(staging, 'digests.txt'), digestLines.join('\n') + '\n');
    renameSync(staging, outDir);
    return { outDir, files: [...files, 'digests.txt'], modelDigest, vocabDigest, vocabSize };
  } catch (err) {
    rmSync(staging, { recursive: true, force: true });
    throw err;
  }
}

/** Recompute and check every entry of a bundle's digests.txt. */
export function verifyBundle(bundleDir: string): boolean {
  const lines = readFileSync(join(bundleDir, 'digests.txt'), 'utf-8')
    .split('\n')
    .filter((line) => line.length > 0);
  for (const line of lines) {
    const [digest, name] = line.split(/\s+/, 2);
    if (sha256(readFileSync(join(bundleDir, name))) !== digest) return false;
  }
  return true;
}

/** The key=value stanza the decoding party compares before trusting a bundle. */
export function descriptorStanza(bundle: ExportBundle): string {
  return `model_digest=${bundle.modelDigest}\nvocab_digest=${bundle.vocabDigest}\n`;
}
