/**
 * Reference WordPiece tokenizer mirroring the maskstego protocol:
 * whitespace split, per-character punctuation isolation (bracketed special
 * tokens like [MASK] stay atomic), then greedy longest-match against a
 * line-indexed vocabulary with "##" marking non-initial pieces.
 *
 * Used to cross-check an exported vocabulary against the Python CLI's
 * `tokenize --ids` output; any drift here would desynchronize the two
 * communicating parties.
 */

export const CONTINUATION_MARKER = '##';
export const UNK_TOKEN = '[UNK]';
export const MAX_CHARS_PER_WORD = 100;

const SPECIAL_TOKEN_RE = /^\[[A-Z]+\]$/;
const EXTRA_PUNCT = new Set(['$', '^', '`', '|', '~', '<', '>', '=', '+']);
const UNICODE_PUNCT_RE = /\p{P}/u;

export function isSpecial(token: string): boolean {
  return SPECIAL_TOKEN_RE.test(token);
}

export function isPunctChar(ch: string): boolean {
  return UNICODE_PUNCT_RE.test(ch) || EXTRA_PUNCT.has(ch);
}

export class Vocabulary {
  readonly tokens: string[];
  readonly index: Map<string, number>;

  constructor(tokens: string[]) {
    this.tokens = tokens;
    this.index = new Map(tokens.map((t, i) => [t, i]));
    if (this.index.size !== tokens.length) {
      throw new Error('vocabulary contains duplicate tokens');
    }
  }

  static fromFileContents(raw: string): Vocabulary {
    return new Vocabulary(raw.split('\n').filter((line) => line.length > 0));
  }

  basicSplit(text: string): string[] {
    const out: string[] = [];
    for (const chunk of text.split(/\s+/).filter(Boolean)) {
      if (isSpecial(chunk)) {
        out.push(chunk);
        continue;
      }
      let buf = '';
      for (const ch of chunk) {
        if (isPunctChar(ch)) {
          if (buf) {
            out.push(buf);
            buf = '';
          }
          out.push(ch);
        } else {
          buf += ch;
        }
      }
      if (buf) out.push(buf);
    }
    return out;
  }

  wordpiece(word: string): string[] {
    if (word.length > MAX_CHARS_PER_WORD) return [UNK_TOKEN];
    const pieces: string[] = [];
    let start = 0;
    while (start < word.length) {
      let end = word.length;
      let piece: string | null = null;
      while (start < end) {
        let sub = word.slice(start, end);
        if (start > 0) sub = CONTINUATION_MARKER + sub;
        if (this.index.has(sub)) {
          piece = sub;
          break;
        }
        end -= 1;
      }
      if (piece === null) return [UNK_TOKEN];
      pieces.push(piece);
      start = end;
    }
    return pieces;
  }

  tokenize(text: string): string[] {
    const out: string[] = [];
    for (const word of this.basicSplit(text)) {
      if (isSpecial(word) && this.index.has(word)) {
        out.push(word);
      } else if (word.length === 1 && isPunctChar(word)) {
        out.push(this.index.has(word) ? word : UNK_TOKEN);
      } else {
        out.push(...this.wordpiece(word));
      }
    }
    return out;
  }

  tokenizeToIds(text: string): number[] {
    const unk = this.index.get(UNK_TOKEN) ?? 0;
    return this.tokenize(text).map((t) => this.index.get(t) ?? unk);
  }
}
