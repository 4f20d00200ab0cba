/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_packet_free: (a: number, b: number) => void;
export const packet_gridBounds: (a: number) => [number, number];
export const packet_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
export const packet_summaryJson: (a: number) => [number, number];
export const packet_varianceCurve: (a: number, b: number) => [number, number];
export const packet_wavefield: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
