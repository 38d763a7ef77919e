import { describe, expect, it } from 'vitest';
import { Vocabulary } from '../src/wordpiece.js';

const vocab = new Vocabulary([
  '[PAD]', '[UNK]', '[MASK]', '.', ',', 'the', 'cat', 'sat', 'on', 'mat',
  'un', '##break', '##able', '##s', 'play', '##ing',
]);

describe('basic split', () => {
  it('isolates punctuation characters', () => {
    expect(vocab.basicSplit('the cat, sat.')).toEqual(['the', 'cat', ',', 'sat', '.']);
  });

  it('keeps bracketed special tokens atomic', () => {
    expect(vocab.basicSplit('the [MASK] sat')).toEqual(['the', '[MASK]', 'sat']);
  });
});

describe('wordpiece', () => {
  it('greedily matches longest pieces', () => {
    expect(vocab.tokenize('unbreakable')).toEqual(['un', '##break', '##able']);
  });

  it('falls back to the unknown token', () => {
    expect(vocab.tokenize('zzzz')).toEqual(['[UNK]']);
  });

  it('tokenizes a full sentence', () => {
    expect(vocab.tokenize('the cats playing on mat.')).toEqual([
      'the', 'cat', '##s', 'play', '##ing', 'on', 'mat', '.',
    ]);
  });

  it('maps ids through the line index', () => {
    expect(vocab.tokenizeToIds('the cat sat.')).toEqual([5, 6, 7, 3]);
  });

  it('rejects duplicate vocabulary entries', () => {
    expect(() => new Vocabulary(['a', 'a'])).toThrow();
  });
});
