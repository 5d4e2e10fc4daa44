/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_billiard_free: (a: number, b: number) => void;
export const __wbg_melnikov_free: (a: number, b: number) => void;
export const billiard_melnikov: (a: number, b: number, c: number, d: number) => [number, number, number];
export const billiard_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const billiard_orbit: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const billiard_outline: (a: number, b: number) => [number, number];
export const billiard_phasePortrait: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const melnikov_constant: (a: number) => number;
export const melnikov_numerical: (a: number) => [number, number];
export const melnikov_predicted: (a: number) => [number, number];
export const melnikov_thetas: (a: number) => [number, number];
export const melnikov_verdict: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
